#include "nwidths/spaces.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace nwidths {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

void check(const CompactBody& A, const Vec& v) {
  if (v.size() != A.dim()) throw std::invalid_argument("compact body: dimension mismatch");
}

}  // namespace

CompactBody::CompactBody(double p, Vec diag) : p_(p), diag_(std::move(diag)) {
  if (!(p_ >= 1.0)) throw std::invalid_argument("compact body: p must be in [1, inf]");
  if (diag_.size() == 0) throw std::invalid_argument("compact body: empty diagonal");
  for (Eigen::Index i = 0; i < diag_.size(); ++i) {
    if (!(diag_(i) > 0.0) || !std::isfinite(diag_(i))) {
      throw std::invalid_argument("compact body: diagonal entries must be positive");
    }
    if (i > 0 && diag_(i) > diag_(i - 1)) {
      throw std::invalid_argument("compact body: diagonal must be nonincreasing");
    }
  }
}

double CompactBody::support(const Vec& psi) const {
  check(*this, psi);
  return Norm::lp(conjugate_exponent(p_), dim()).value(diag_.cwiseProduct(psi));
}

Vec CompactBody::support_point(const Vec& psi) const {
  check(*this, psi);
  const Vec w = Norm::lp(p_, dim()).dual_norming_vector(diag_.cwiseProduct(psi));
  return diag_.cwiseProduct(w);
}

double CompactBody::gauge(const Vec& x) const {
  check(*this, x);
  return Norm::lp(p_, dim()).value(x.cwiseQuotient(diag_));
}

Norm CompactBody::support_norm() const {
  return Norm::scaled_lp(conjugate_exponent(p_), diag_);
}

std::vector<Vec> CompactBody::vertices() const {
  std::vector<Vec> out;
  const int d = dim();
  if (p_ == 1.0) {
    for (int j = 0; j < d; ++j) out.push_back(diag_(j) * Vec::Unit(d, j));
  } else if (p_ == kInf) {
    if (d > 20) throw std::invalid_argument("compact body: too many vertices");
    const long count = 1L << (d - 1);
    for (long s = 0; s < count; ++s) {
      Vec v = diag_;
      for (int i = 1; i < d; ++i) {
        if ((s >> (i - 1)) & 1L) v(i) = -v(i);
      }
      out.push_back(v);
    }
  }
  return out;
}

CompactBody CompactBody::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("compact body: scale must be positive");
  return CompactBody(p_, c * diag_);
}

double norm(const FiniteNormedSpace& space, const Vec& x) { return space.value(x); }

double dual_norm(const FiniteNormedSpace& space, const Vec& phi) {
  return space.dual_value(phi);
}

double support_function(const CompactBody& A, const Vec& psi) { return A.support(psi); }

Vec halton_point(std::uint64_t index, int dim, const Vec& shift) {
  if (dim > static_cast<int>(std::size(kPrimes))) {
    throw std::invalid_argument("halton_point: dimension too large");
  }
  Vec u(dim);
  for (int i = 0; i < dim; ++i) {
    double v = radical_inverse(index, kPrimes[i]) + shift(i);
    u(i) = v - std::floor(v);
  }
  return u;
}

Mat dual_ball_sample(const FiniteNormedSpace& space, const DualSampleOptions& opts) {
  const int d = space.dim();
  std::vector<Vec> rows;
  if (space.polyhedral()) {
    const Mat F = space.polytope_facets();
    for (Eigen::Index i = 0; i < F.rows(); ++i) rows.push_back(F.row(i).transpose());
  }
  if (opts.include_axes) {
    for (int i = 0; i < d; ++i) {
      const Vec e = Vec::Unit(d, i);
      const Vec phi = e / space.dual_value(e);
      rows.push_back(phi);
      rows.push_back(-phi);
    }
  }
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec shift(d);
  for (int i = 0; i < d; ++i) shift(i) = unif(rng);
  const boost::math::normal_distribution<double> gauss;
  std::uint64_t index = 1;
  int added = 0;
  while (added < opts.size) {
    const Vec u = halton_point(index++, d, shift);
    Vec g(d);
    for (int i = 0; i < d; ++i) {
      const double t = std::min(std::max(u(i), 1e-12), 1.0 - 1e-12);
      g(i) = boost::math::quantile(gauss, t);
    }
    const double dn = space.dual_value(g);
    if (!(dn > 0.0)) continue;
    rows.push_back(g / dn);
    ++added;
  }
  Mat out(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

}  // namespace nwidths
