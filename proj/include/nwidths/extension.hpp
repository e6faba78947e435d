#pragma once

#include <cstdint>
#include <vector>

#include "nwidths/spaces.hpp"
#include "nwidths/widths.hpp"

namespace nwidths {

/// Values c_k(phi) over the dual sample, one entry per sample row.
struct CoefficientFunction {
  Vec table;
  /// Set by linearity_filter when the table is <v, phi> up to tolerance.
  bool linear = false;
  /// Least-squares v with table ~ sample * v.
  Vec linear_part;
  double deviation = 0.0;
};

/// lin{X, c_1, ..., c_n} realized as functions on a finite subset of B(X*),
/// with ||x + sum t_k c_k|| = max_s |<x, phi_s> + sum t_k c_k(phi_s)|.
struct ExtensionSpace {
  Norm base;
  Mat sample;  // one dual vector per row
  std::vector<CoefficientFunction> ext_functions;
  /// Number of coefficient functions that are not linear.
  int n_ext = 0;

  double norm(const Vec& x, const Vec& t) const;
  double norm(const Vec& x) const { return norm(x, Vec::Zero(0)); }
};

struct OptimalFunctionals {
  Mat Phi;                 // d x n, one functional per column
  double achieved = 0.0;   // re-evaluated section value
  double target = 0.0;     // d^n upper + eps
  WidthEstimate gelfand;
};

/// Functionals from gelfand_search with the section value re-evaluated
/// independently. eps is relative to the Gelfand value.
OptimalFunctionals optimal_functionals(const CompactBody& A, const Norm& X, int n, double eps,
                                       const SearchOptions& opts = {});

/// argmin_c sigma_A(phi - basis c), ties broken by least Euclidean length.
Vec best_approx_coeffs(const Vec& phi, const Mat& basis, const CompactBody& A);

/// Coefficient tables for every sample row, S x n.
Mat coefficient_tables(const CompactBody& A, const Mat& basis, const Mat& sample);

CoefficientFunction linearity_filter(const Vec& table, const Mat& sample, double tol = 1e-8);

ExtensionSpace build_extension(const Norm& base, const Mat& sample,
                               std::vector<CoefficientFunction> coeffs);

/// sup_{x in A} ||j(x) - sum_k <x, phi_k> c_k|| in the sampled extension;
/// equals max_s sigma_A(phi_s - Phi c(phi_s)).
WidthEstimate extension_width_value(const CompactBody& A, const ExtensionSpace& ext,
                                    const Mat& Phi);

struct ChainOptions {
  SearchOptions search;
  double eps = 1e-3;
  int sample_size = 1000;
  std::uint64_t sample_seed = 0;
  double linearity_tol = 1e-8;
  int max_evals = 6000;
};

struct ChainReport {
  std::vector<WidthEstimate> chain;  // m = 0..n
  WidthTriple widths;
  ExtensionSpace extension;
  Mat Phi;
  double extension_value = 0.0;
  /// value(2S) - value(S) for nested dual samples.
  double slack = 0.0;
  int nonlinear = 0;
};

ChainReport preabsolute_chain(const CompactBody& A, const Norm& X, int n,
                              const ChainOptions& opts = {});

struct RankOneCertificate {
  double lower = 0.0;   // certified lower bound on d_1 = lambda_1
  double upper = 0.0;   // best line found
  double gelfand = 0.0; // d^1 (upper)
  bool gelfand_certified = false;
  double margin = 0.0;  // lower - gelfand
  long cells = 0;
  Vec best_direction;
};

/// Branch and bound over lines for A a diagonal l_1-ball image and X a
/// polytope norm, where lambda_1 = d_1 = min_u max_j a_j dist(e_j, span u).
RankOneCertificate certify_rank_one_gap(const CompactBody& A, const Norm& X,
                                        double rel_tol = 1e-4, long max_cells = 2000000);

}  // namespace nwidths
