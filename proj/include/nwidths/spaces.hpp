#pragma once

#include <cstdint>
#include <vector>

#include "nwidths/norms.hpp"

namespace nwidths {

/// A finite-dimensional Banach space is fully described by its norm.
using FiniteNormedSpace = Norm;

/// A = diag * B(l_p^d), a convex origin-symmetric compact body.
class CompactBody {
 public:
  CompactBody() = default;
  /// diag must be positive and nonincreasing; p in [1, inf].
  CompactBody(double p, Vec diag);

  int dim() const { return static_cast<int>(diag_.size()); }
  double p() const { return p_; }
  const Vec& diag() const { return diag_; }

  /// sigma_A(psi) = sup_{x in A} <x, psi> = ||diag .* psi||_{p'}.
  double support(const Vec& psi) const;
  /// A point x in A with <x, psi> = support(psi).
  Vec support_point(const Vec& psi) const;
  /// Gauge of A, i.e. ||x ./ diag||_p.
  double gauge(const Vec& x) const;
  /// The norm psi -> support(psi) as a Norm object.
  Norm support_norm() const;
  /// Extreme points modulo sign, for p = 1 (d points) and p = inf (2^{d-1}).
  /// Empty for 1 < p < inf.
  std::vector<Vec> vertices() const;
  bool polytope() const { return p_ == 1.0 || p_ == kInf; }
  CompactBody scaled(double c) const;

 private:
  double p_ = 2.0;
  Vec diag_;
};

double norm(const FiniteNormedSpace& space, const Vec& x);
double dual_norm(const FiniteNormedSpace& space, const Vec& phi);
double support_function(const CompactBody& A, const Vec& psi);

struct DualSampleOptions {
  /// Quasi-random points on the dual unit sphere. For polyhedral norms these
  /// are added on top of the dual-ball vertices.
  int size = 1000;
  std::uint64_t seed = 0;
  /// Add the normalized coordinate functionals +-e_i / ||e_i||_*.
  bool include_axes = true;
};

/// Deterministic sample of the dual unit sphere, one point per row.
///
/// Polyhedral norms contribute every vertex of B(X*) first. Random points
/// come from a shifted Halton sequence, so the sample of size m is a prefix
/// of the sample of size 2m with the same seed.
Mat dual_ball_sample(const FiniteNormedSpace& space, const DualSampleOptions& opts);

/// Halton point `index` (>= 1) in [0,1)^dim with a Cranley-Patterson shift.
Vec halton_point(std::uint64_t index, int dim, const Vec& shift);

}  // namespace nwidths
