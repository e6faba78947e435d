#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace nwidths {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// a^e for a >= 0, with fast paths for the exponents that show up for
/// p in {1.5, 2, 3}.
inline double abs_pow(double a, double e) {
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  if (e == 3.0) return a * a * a;
  if (e == 0.5) return std::sqrt(a);
  if (e == 1.5) return a * std::sqrt(a);
  if (e == -0.5) return 1.0 / std::sqrt(a);
  if (e == 1.0 / 3.0) return std::cbrt(a);
  if (e == 2.0 / 3.0) return std::cbrt(a * a);
  if (e == 0.0) return 1.0;
  return std::pow(a, e);
}

/// Conjugate exponent p' = p/(p-1), with 1' = inf and inf' = 1.
double conjugate_exponent(double p);

/// A norm on R^d: either a scaled l_p norm ||s .* x||_p or a polytope gauge
/// max_f <x, f> over a sign-symmetric facet set.
///
/// Polytope facet rows are the vertices of the dual unit ball, so dual-side
/// quantities for polytopes go through a small linear program.
class Norm {
 public:
  enum class Kind { Lp, Polytope };

  static Norm lp(double p, int dim);
  /// Weighted form (sum w_i |x_i|^p)^{1/p}; for p = inf this is max w_i |x_i|.
  static Norm weighted_lp(double p, const Vec& weights);
  /// ||s .* x||_p.
  static Norm scaled_lp(double p, const Vec& scale);
  /// Facets given as rows; the set must be closed under negation.
  static Norm polytope(const Mat& facets);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  const Vec& scale() const { return scale_; }
  const Mat& facets() const { return facets_; }

  /// Smooth strictly convex l_p, 1 < p < inf.
  bool smooth() const { return kind_ == Kind::Lp && p_ > 1.0 && p_ < kInf; }
  bool hilbert() const { return kind_ == Kind::Lp && p_ == 2.0; }
  /// True for polytope norms and for l_1 / l_inf, which are handled as
  /// polytopes internally.
  bool polyhedral() const { return !smooth(); }

  double operator()(const Vec& x) const { return value(x); }
  double value(const Vec& x) const;
  double dual_value(const Vec& phi) const;

  /// phi with dual_value(phi) = 1 and <x, phi> = value(x); zero for x = 0.
  Vec norming_functional(const Vec& x) const;
  /// x with value(x) = 1 and <x, phi> = dual_value(phi); zero for phi = 0.
  Vec dual_norming_vector(const Vec& phi) const;

  /// Dual norm as a Norm object (l_p kinds only).
  Norm dual() const;
  /// Facet description; for l_1 this enumerates 2^d sign vectors.
  Mat polytope_facets() const;

  /// Lower bound on min ||x|| over the Euclidean unit sphere.
  double euclidean_lower_constant() const;
  /// Same bound restricted to the span of the first k coordinates.
  double euclidean_lower_constant(int k) const;
  /// max_i sup{|x_i| : ||x|| <= 1}.
  double box_radius() const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Lp;
  int dim_ = 0;
  double p_ = 2.0;
  Vec scale_;
  Mat facets_;
};

}  // namespace nwidths
