#include "nwidths/best_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nwidths/lp.hpp"

namespace nwidths {
namespace {

BestApproximation finish(const Norm& norm, const Vec& y, const Mat& U, Vec c) {
  BestApproximation out;
  const Vec r = y - U * c;
  out.coeffs = std::move(c);
  out.value = norm.value(r);
  out.certificate = norm.norming_functional(r);
  out.gradient_norm =
      U.cols() > 0 ? (U.transpose() * out.certificate).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

Vec least_squares(const Vec& scale, const Vec& y, const Mat& U) {
  const Mat B = scale.asDiagonal() * U;
  return B.completeOrthogonalDecomposition().solve(scale.cwiseProduct(y));
}

// Single direction: g'(c) is increasing, so safeguarded Newton on a bracket.
double smooth_lp_line(const Norm& norm, const Vec& y, const Vec& u) {
  const double p = norm.p();
  const Vec& s = norm.scale();
  const Eigen::Index d = y.size();
  double tmax = 0.0;
  double bb = 0.0;
  double tb = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double b = s(i) * u(i);
    const double t = s(i) * y(i);
    tmax = std::max(tmax, std::abs(t));
    bb += b * b;
    tb += t * b;
  }
  if (tmax == 0.0 || bb == 0.0) return 0.0;
  // h(c) = sum b_i sign(r_i) |r_i|^{p-1}, r = t - c b; c* solves h(c) = 0.
  auto h = [&](double c, double& dh) {
    double v = 0.0;
    dh = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double b = s(i) * u(i);
      const double r = (s(i) * y(i) - c * b) / tmax;
      const double a = std::abs(r);
      if (a > 0.0) {
        const double ap = abs_pow(a, p - 2.0);
        v += b * r * ap;
        dh += (p - 1.0) * b * b * ap;
      }
    }
    return v;
  };
  // Zeros of r_i bound the root: h > 0 below every breakpoint and < 0 above.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double b = s(i) * u(i);
    if (b == 0.0) continue;
    const double z = s(i) * y(i) / b;
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  double c = std::clamp(tb / bb, lo, hi);
  for (int it = 0; it < 100; ++it) {
    double dh = 0.0;
    const double v = h(c, dh);
    if (v == 0.0) break;
    if (v > 0.0) {
      lo = c;
    } else {
      hi = c;
    }
    double next = dh > 0.0 ? c + v / dh : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - c) <= 1e-15 * (1.0 + std::abs(c)) || hi - lo <= 1e-15 * (1.0 + std::abs(c))) {
      c = next;
      break;
    }
    c = next;
  }
  return c;
}

// Damped Newton on f(c) = sum |s_i (y - U c)_i|^p, started from least squares.
Vec smooth_lp_newton(const Norm& norm, const Vec& y, const Mat& U) {
  const double p = norm.p();
  const Vec& s = norm.scale();
  Mat B = s.asDiagonal() * U;
  Vec t = s.cwiseProduct(y);
  const double tscale = t.cwiseAbs().maxCoeff();
  const int n = static_cast<int>(U.cols());
  if (tscale == 0.0) return Vec::Zero(n);
  t /= tscale;

  auto objective = [&](const Vec& c) {
    const Vec r = t - B * c;
    double v = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) v += abs_pow(std::abs(r(i)), p);
    return v;
  };

  Vec c = B.completeOrthogonalDecomposition().solve(t);
  double f = objective(c);
  const double bnorm = B.norm() + 1e-300;
  for (int it = 0; it < 200; ++it) {
    const Vec r = t - B * c;
    const Eigen::ArrayXd a = r.array().abs();
    const double amax = a.maxCoeff();
    if (amax == 0.0) break;
    Eigen::ArrayXd g = r.array().sign() * a.unaryExpr([p](double v) { return abs_pow(v, p - 1.0); });
    const Vec grad = -p * (B.transpose() * g.matrix());
    const double floor = 1e-10 * amax;
    Eigen::ArrayXd w =
        p * (p - 1.0) * a.max(floor).unaryExpr([p](double v) { return abs_pow(v, p - 2.0); });
    Mat H = B.transpose() * w.matrix().asDiagonal() * B;
    H.diagonal().array() += 1e-14 * (H.trace() / std::max(1, n) + 1e-300);
    Vec step = H.ldlt().solve(-grad);
    if (!step.allFinite()) step = -grad;
    double slope = grad.dot(step);
    if (slope >= 0) {
      step = -grad;
      slope = -grad.squaredNorm();
    }
    double alpha = 1.0;
    double fnew = objective(c + step);
    int bt = 0;
    while (!(fnew <= f + 1e-4 * alpha * slope) && bt < 60) {
      alpha *= 0.5;
      fnew = objective(c + alpha * step);
      ++bt;
    }
    if (!(fnew <= f)) break;
    const Vec delta = alpha * step;
    c += delta;
    const double fold = f;
    f = fnew;
    const double gscaled = grad.cwiseAbs().maxCoeff() / (p * bnorm * std::pow(amax, p - 1.0));
    if (delta.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + c.cwiseAbs().maxCoeff()) ||
        (fold - f) <= 1e-16 * fold || gscaled < 1e-15) {
      break;
    }
  }
  return c * tscale;
}

struct DualSolution {
  Vec coeffs;
  Vec certificate;
};

// p < 2: the primal Hessian blows up where residual entries vanish, so work
// with the dual min{||N z||_{p'} : <N^T t, z> = 1}, N spanning ker B^T, whose
// exponent p' > 2 keeps Newton well-behaved. The residual is then
// dist * J_{p'}(psi) and c follows by least squares. psi itself is the
// certificate; the residual's duality map is badly conditioned near p = 1.
DualSolution smooth_lp_dual(const Norm& norm, const Vec& y, const Mat& U) {
  const double p = norm.p();
  const double pd = conjugate_exponent(p);
  const Vec& s = norm.scale();
  const Mat B = s.asDiagonal() * U;
  Vec t = s.cwiseProduct(y);
  const double tscale = t.cwiseAbs().maxCoeff();
  const int n = static_cast<int>(U.cols());
  if (tscale == 0.0) return {Vec::Zero(n), Vec::Zero(y.size())};
  t /= tscale;
  const Eigen::Index d = t.size();

  Eigen::ColPivHouseholderQR<Mat> qr(B);
  const Eigen::Index rank = qr.rank();
  const Mat Q = qr.householderQ() * Mat::Identity(d, d);
  const Mat N = Q.rightCols(d - rank);
  const auto cod = B.completeOrthogonalDecomposition();
  if (N.cols() == 0) return {cod.solve(t) * tscale, Vec::Zero(d)};
  const Vec g = N.transpose() * t;
  if (g.norm() <= 1e-14) return {cod.solve(t) * tscale, Vec::Zero(d)};

  // z = z0 + K w with K spanning g^perp.
  const Vec z0 = g / g.squaredNorm();
  Eigen::HouseholderQR<Mat> gq(g);
  const Mat G = gq.householderQ() * Mat::Identity(g.size(), g.size());
  const Mat K = G.rightCols(g.size() - 1);
  const Mat NK = N * K;
  const Vec v0 = N * z0;

  auto objective = [&](const Vec& w) {
    const Vec v = v0 + NK * w;
    double f = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) f += abs_pow(std::abs(v(i)), pd);
    return f;
  };
  Vec w = Vec::Zero(K.cols());
  double f = objective(w);
  for (int it = 0; it < 400 && K.cols() > 0; ++it) {
    const Vec v = v0 + NK * w;
    Vec gr(d);
    Vec h(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = std::abs(v(i));
      const double ap = abs_pow(a, pd - 2.0);
      gr(i) = pd * v(i) * ap;
      h(i) = pd * (pd - 1.0) * ap;
    }
    const Vec grad = NK.transpose() * gr;
    Mat H = NK.transpose() * h.asDiagonal() * NK;
    H.diagonal().array() += 1e-12 * (H.trace() / static_cast<double>(H.rows()) + 1e-300);
    Vec step = H.ldlt().solve(-grad);
    if (!step.allFinite()) step = -grad;
    double slope = grad.dot(step);
    if (slope >= 0.0) {
      step = -grad;
      slope = -grad.squaredNorm();
    }
    double alpha = 1.0;
    double fnew = objective(w + step);
    int bt = 0;
    while (!(fnew <= f + 1e-4 * alpha * slope) && bt < 60) {
      alpha *= 0.5;
      fnew = objective(w + alpha * step);
      ++bt;
    }
    if (!(fnew <= f)) break;
    const Vec delta = alpha * step;
    w += delta;
    f = fnew;
    if (delta.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + w.cwiseAbs().maxCoeff())) break;
  }
  const Vec v = v0 + NK * w;
  const double m = abs_pow(f, 1.0 / pd);
  const double dist = 1.0 / m;
  Vec r(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double a = std::abs(v(i)) / m;
    r(i) = (v(i) >= 0.0 ? 1.0 : -1.0) * dist * abs_pow(a, pd - 1.0);
  }
  return {cod.solve(t - r) * tscale, s.cwiseProduct(v / m)};
}

struct PolyhedralSolution {
  Vec coeffs;
  Vec certificate;
};

PolyhedralSolution polyhedral_lp(const Norm& norm, const Vec& y, const Mat& U,
                                 TieBreak ties) {
  // max sum_f mu_f <f, y>  s.t.  sum mu_f = 1, sum mu_f U^T f = 0, mu >= 0.
  // Its dual variables are (-value, -c).
  const Mat G = norm.polytope_facets();
  const int m = static_cast<int>(G.rows());
  const int n = static_cast<int>(U.cols());
  const Vec Gy = G * y;
  const Mat GU = G * U;
  Mat A(n + 1, m);
  A.row(0).setOnes();
  A.bottomRows(n) = GU.transpose();
  Vec b = Vec::Zero(n + 1);
  b(0) = 1.0;
  const lp::Solution sol = lp::solve_standard_form(-Gy, A, b);
  if (sol.status != lp::Status::Optimal) {
    throw std::runtime_error("best_approximation: facet LP failed");
  }
  PolyhedralSolution out;
  out.coeffs = -sol.dual.tail(n);
  out.certificate = G.transpose() * sol.x;
  if (ties == TieBreak::MinEuclidean && n > 0) {
    const double v = std::max(0.0, (Gy - GU * out.coeffs).maxCoeff());
    const double slack = v * (1.0 + 1e-10) + 1e-14 * (1.0 + Gy.cwiseAbs().maxCoeff());
    Vec cmin;
    if (lp::least_distance(GU, Gy - Vec::Constant(m, slack), cmin) &&
        (Gy - GU * cmin).maxCoeff() <= slack * (1.0 + 1e-9)) {
      out.coeffs = cmin;
    }
  }
  return out;
}

}  // namespace

BestApproximation best_approximation(const Norm& norm, const Vec& y, const Mat& U,
                                     TieBreak ties) {
  if (y.size() != norm.dim() || U.rows() != norm.dim()) {
    throw std::invalid_argument("best_approximation: dimension mismatch");
  }
  const int n = static_cast<int>(U.cols());
  if (n == 0) return finish(norm, y, U, Vec::Zero(0));
  if (norm.hilbert()) return finish(norm, y, U, least_squares(norm.scale(), y, U));
  if (norm.smooth()) {
    if (n == 1) return finish(norm, y, U, Vec::Constant(1, smooth_lp_line(norm, y, U.col(0))));
    if (norm.p() < 2.0) {
      DualSolution ds = smooth_lp_dual(norm, y, U);
      BestApproximation out = finish(norm, y, U, std::move(ds.coeffs));
      if (out.value > 0.0 && ds.certificate.cwiseAbs().maxCoeff() > 0.0) {
        out.certificate = std::move(ds.certificate);
        out.gradient_norm = (U.transpose() * out.certificate).cwiseAbs().maxCoeff();
      }
      return out;
    }
    return finish(norm, y, U, smooth_lp_newton(norm, y, U));
  }

  PolyhedralSolution poly = polyhedral_lp(norm, y, U, ties);
  BestApproximation out = finish(norm, y, U, std::move(poly.coeffs));
  if (out.value > 0.0) {
    out.certificate = std::move(poly.certificate);
    out.gradient_norm = (U.transpose() * out.certificate).cwiseAbs().maxCoeff();
  }
  return out;
}

double distance_to_span(const Norm& norm, const Vec& y, const Mat& U) {
  return best_approximation(norm, y, U).value;
}

}  // namespace nwidths
