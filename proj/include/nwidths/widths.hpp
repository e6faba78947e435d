#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nwidths/classes.hpp"
#include "nwidths/spaces.hpp"

namespace nwidths {

struct WidthEstimate {
  int n = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> method;
  /// True only when the lower certificate meets the searched upper value.
  bool certified = false;
  /// The search stopped on an evaluation or exchange budget.
  bool budget_exhausted = false;
  /// Set by enforce_monotone when a lower bound exceeds the running-minimum upper.
  bool monotone_violation = false;
  /// Upper value before running-minimum post-processing.
  double raw_upper = 0.0;

  std::string method_string() const;
};

/// u = diag(entries): l_p^d -> l_q^d.
struct DiagonalOperator {
  Vec entries;
  double p = 2.0;
  double q = 2.0;

  DiagonalOperator() = default;
  DiagonalOperator(Vec entries, double p, double q);
  int dim() const { return static_cast<int>(entries.size()); }
  /// u B(l_p).
  CompactBody body() const;
  /// l_q^d.
  Norm target() const;
};

struct SearchOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  /// Nelder-Mead evaluations per local run.
  int max_evals = 2000;
  /// Chart re-centerings per local run.
  int recenter = 4;
  /// Exchange rounds when the inner supremum has no closed form.
  int exchange_rounds = 12;
  /// Relative gap at which the surrogate and the verified value count as equal.
  double exchange_tol = 1e-6;
  /// Ascent steps taken from each stored worst point inside the surrogate.
  int track_steps = 2;
  /// Random starts for the inner ascent, on top of axis and warm starts.
  int inner_random_starts = 3;
};

/// Searched subspace: orthonormal basis U (Kolmogorov) or functionals Phi
/// (Gelfand), one per column.
struct SubspaceResult {
  WidthEstimate estimate;
  Mat basis;
};

/// Rank-n operator P = U Phi^T.
struct LinearResult {
  WidthEstimate estimate;
  Mat U;
  Mat Phi;
};

struct WidthTriple {
  SubspaceResult kolmogorov;
  SubspaceResult gelfand;
  LinearResult linear;
};

/// Hilbert case: the (n+1)-th largest entry.
WidthEstimate svd_oracle(const DiagonalOperator& u, int n);

SubspaceResult kolmogorov_search(const CompactBody& A, const Norm& X, int n,
                                 const SearchOptions& opts = {},
                                 const std::vector<Mat>& extra_seeds = {});
SubspaceResult gelfand_search(const CompactBody& A, const Norm& X, int n,
                              const SearchOptions& opts = {},
                              const std::vector<Mat>& extra_seeds = {});
/// Seeds from the supplied Kolmogorov / Gelfand optima when given.
LinearResult linear_search(const CompactBody& A, const Norm& X, int n,
                           const SearchOptions& opts = {},
                           const SubspaceResult* kolmogorov = nullptr,
                           const SubspaceResult* gelfand = nullptr);

/// All three searches, cross-seeded so that d_n, d^n <= lambda_n holds on the
/// returned values.
WidthTriple compute_widths(const CompactBody& A, const Norm& X, int n,
                           const SearchOptions& opts = {});

/// 2 d^n.
WidthEstimate cowidth(const CompactBody& A, const Norm& X, int n,
                      const SearchOptions& opts = {});

/// Same entries, l_{q'} -> l_{p'}.
DiagonalOperator adjoint(const DiagonalOperator& u);

struct DualityReport {
  int n = 0;
  WidthEstimate gelfand_u;
  WidthEstimate kolmogorov_adjoint;
  WidthEstimate linear_u;
  WidthEstimate linear_adjoint;
  /// |d^n(u) - d_n(u*)| / max.
  double gelfand_gap = 0.0;
  /// |lambda_n(u) - lambda_n(u*)| / max.
  double linear_gap = 0.0;
};

struct SuiteCase {
  DiagonalOperator op;
  int n = 1;
};

/// Seeded diagonal operators: entries uniform in [lo, 1] sorted decreasingly;
/// case i uses p = exps[i % k], q = exps[(i / k) % k], n = ns[(i / k^2) % |ns|].
std::vector<SuiteCase> operator_suite(std::uint64_t seed, int count = 20, int dim = 4,
                                      const std::vector<double>& exps = {1.5, 2.0, 3.0},
                                      const std::vector<int>& ns = {1, 2}, double lo = 0.1);

DualityReport duality_check(const DiagonalOperator& u, int n, const SearchOptions& opts = {});

/// Inner suprema for a fixed subspace or operator, on the unnormalized body.
double kolmogorov_value(const CompactBody& A, const Norm& X, const Mat& U);
double gelfand_value(const CompactBody& A, const Norm& X, const Mat& Phi);
double linear_value(const CompactBody& A, const Norm& X, const Mat& U, const Mat& Phi);
/// sup_{x in A} ||x||_X.
double radius(const CompactBody& A, const Norm& X);

/// Lower bound for all three widths from the inscribed Euclidean ball of the
/// first n+1 coordinates and, for l_p targets, the adjoint relaxation.
WidthEstimate certificate_lower_bound(const CompactBody& A, const Norm& X, int n);

struct ProjectionOptions {
  int grid_N = 0;  // 0: 4 K
  int K = 0;       // 0: 4 n, at least 8
  int random_starts = 3;
  int max_iter = 400;
  std::uint64_t seed = 0;
};

/// sup ||f - S_n f||_q over the discretized class, by power iteration.
/// For p = q = 2 the closed form max_{n<k<=K} lambda(k) is returned.
WidthEstimate projection_upper_bound(const FunctionClass& cls, double q, int n,
                                     const ProjectionOptions& opts = {});

/// Lower bound for the Gelfand width of index 2n of the class in L_q:
/// lambda(n+1) divided by the Nikolskii / Hoelder constants of degree n+1.
double class_lower_bound(const FunctionClass& cls, double q, int n);

/// Running minimum of uppers in n order; flags lowers above the result.
void enforce_monotone(std::vector<WidthEstimate>& estimates);

}  // namespace nwidths
