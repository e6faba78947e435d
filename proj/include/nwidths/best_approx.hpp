#pragma once

#include "nwidths/norms.hpp"

namespace nwidths {

/// Result of min_c ||y - U c||.
///
/// `certificate` is a dual functional phi with dual norm <= 1, phi^T U = 0
/// (to solver precision) and <y - U c, phi> = value. It is the subgradient of
/// the distance function y -> dist(y, span U).
struct BestApproximation {
  Vec coeffs;
  double value = 0.0;
  Vec certificate;
  /// ||U^T certificate||_inf, the first-order optimality residual.
  double gradient_norm = 0.0;
};

enum class TieBreak { None, MinEuclidean };

/// Best approximation of y from the column span of U in the given norm.
///
/// Hilbert norms use weighted least squares, smooth l_p norms a damped
/// Newton method, and polyhedral norms the facet LP. With
/// TieBreak::MinEuclidean the polyhedral case returns the optimal
/// coefficient vector of least Euclidean length.
BestApproximation best_approximation(const Norm& norm, const Vec& y, const Mat& U,
                                     TieBreak ties = TieBreak::None);

/// Shorthand for best_approximation(norm, y, U).value.
double distance_to_span(const Norm& norm, const Vec& y, const Mat& U);

}  // namespace nwidths
