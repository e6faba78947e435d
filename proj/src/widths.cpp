#include "nwidths/widths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nwidths/best_approx.hpp"
#include "nwidths/fourier.hpp"
#include "nwidths/optimize.hpp"

namespace nwidths {
namespace {

constexpr double kPi = std::numbers::pi;

enum class Kind { Kolmogorov, Gelfand, Linear };

struct State {
  Mat U;
  Mat Phi;
};

using Maxima = std::vector<std::pair<double, Vec>>;

double round_mantissa(double v, int bits) {
  int e = 0;
  const double m = std::frexp(v, &e);
  return std::ldexp(std::round(std::ldexp(m, bits)), e - bits);
}

// A scaled to max(diag) = 1. Mantissas are trimmed so that c*A and A map to
// the same normalized body even when c*a_i rounds differently.
struct Normalized {
  CompactBody A;
  double scale = 1.0;
};

Normalized normalize(const CompactBody& A) {
  const double s = A.diag()(0);
  Vec d = A.diag() / s;
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = round_mantissa(d(i), 40);
  d(0) = 1.0;
  for (Eigen::Index i = 1; i < d.size(); ++i) d(i) = std::min(d(i), d(i - 1));
  return {CompactBody(A.p(), d), s};
}

double spectral_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

Mat orthonormal_basis(const Mat& U) {
  Eigen::HouseholderQR<Mat> qr(U);
  return qr.householderQ() * Mat::Identity(U.rows(), U.cols());
}

Mat full_orthogonal(const Mat& U) {
  Eigen::HouseholderQR<Mat> qr(U);
  return qr.householderQ() * Mat::Identity(U.rows(), U.rows());
}

// Null space of M (rows x d) as orthonormal columns.
Mat null_space(const Mat& M) {
  const int d = static_cast<int>(M.cols());
  if (M.rows() == 0) return Mat::Identity(d, d);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double tol = 1e-12 * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return svd.matrixV().rightCols(d - rank);
}

// Sign-canonical form: first significant entry positive.
Vec canonical(const Vec& w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > 1e-12) return w(i) < 0 ? Vec(-w) : w;
  }
  return w;
}

Mat half_facets(const Norm& X) {
  const Mat F = X.polytope_facets();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    bool dup = false;
    const Vec fi = canonical(F.row(i).transpose());
    for (Eigen::Index j : keep) {
      if ((canonical(F.row(j).transpose()) - fi).cwiseAbs().maxCoeff() < 1e-14) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat H(static_cast<Eigen::Index>(keep.size()), F.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) H.row(k) = F.row(keep[k]);
  return H;
}

Vec gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

// Inner supremum over A (or B(X*) for Gelfand) for a fixed operator.
class Inner {
 public:
  Inner(const CompactBody& A, const Norm& X, int random_starts)
      : A_(A), X_(X), random_starts_(random_starts) {}
  virtual ~Inner() = default;

  virtual bool exact() const = 0;
  virtual double exact_value(const State& s) const = 0;
  virtual double point_value(const Vec& w, const State& s) const = 0;
  // Value at w; w is replaced by the next ascent iterate.
  virtual double step_value(Vec& w, const State& s) const = 0;
  virtual std::vector<Vec> starts(std::mt19937_64& rng) const = 0;

  Maxima ascend(const State& s, const std::vector<Vec>& warm, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<Vec> init = starts(rng);
    init.insert(init.end(), warm.begin(), warm.end());
    Maxima out;
    for (const Vec& w0 : init) {
      Vec w = w0;
      Vec best = w0;
      double v = -1.0;
      for (int it = 0; it < 200; ++it) {
        const Vec cur = w;
        const double vc = step_value(w, s);
        if (!(vc > v * (1.0 + 1e-13) + 1e-300)) {
          if (vc > v) {
            v = vc;
            best = cur;
          }
          break;
        }
        v = vc;
        best = cur;
      }
      out.emplace_back(v, canonical(best));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    return out;
  }

  // Best value along a few ascent steps from w; attained in A, so never
  // above the true supremum.
  double tracked_value(const Vec& w0, const State& s, int steps) const {
    Vec w = w0;
    double v = 0.0;
    for (int i = 0; i < std::max(1, steps); ++i) v = std::max(v, step_value(w, s));
    return v;
  }

  double true_value(const State& s, std::uint64_t seed) const {
    if (exact()) return exact_value(s);
    const Maxima m = ascend(s, {}, seed);
    return m.empty() ? 0.0 : m.front().first;
  }

 protected:
  std::vector<Vec> body_starts(std::mt19937_64& rng) const {
    std::vector<Vec> out;
    const int d = A_.dim();
    for (int j = 0; j < d; ++j) out.push_back(A_.diag()(j) * Vec::Unit(d, j));
    for (int r = 0; r < random_starts_; ++r) out.push_back(A_.support_point(gaussian(rng, d)));
    return out;
  }

  const CompactBody& A_;
  const Norm& X_;
  int random_starts_;
};

class KolmogorovInner : public Inner {
 public:
  using Inner::Inner;
  bool exact() const override { return A_.polytope() || (X_.hilbert() && A_.p() == 2.0); }
  double exact_value(const State& s) const override {
    if (X_.hilbert() && A_.p() == 2.0) {
      const Vec& sc = X_.scale();
      const Mat Q = orthonormal_basis(sc.asDiagonal() * s.U);
      Mat M = sc.cwiseProduct(A_.diag()).asDiagonal();
      M -= Q * (Q.transpose() * M);
      return spectral_norm(M);
    }
    double v = 0.0;
    for (const Vec& x : A_.vertices()) v = std::max(v, distance_to_span(X_, x, s.U));
    return v;
  }
  double point_value(const Vec& x, const State& s) const override {
    return distance_to_span(X_, x, s.U);
  }
  double step_value(Vec& x, const State& s) const override {
    const BestApproximation ba = best_approximation(X_, x, s.U);
    if (ba.value > 0.0) x = A_.support_point(ba.certificate);
    return ba.value;
  }
  std::vector<Vec> starts(std::mt19937_64& rng) const override { return body_starts(rng); }
};

class GelfandInner : public Inner {
 public:
  GelfandInner(const CompactBody& A, const Norm& X, int random_starts)
      : Inner(A, X, random_starts), sigma_(A.support_norm()) {
    if (X.polyhedral()) facets_ = half_facets(X);
  }
  bool exact() const override { return X_.polyhedral() || (X_.hilbert() && A_.p() == 2.0); }
  double exact_value(const State& s) const override {
    if (X_.polyhedral()) {
      double v = 0.0;
      for (Eigen::Index i = 0; i < facets_.rows(); ++i) {
        v = std::max(v, distance_to_span(sigma_, facets_.row(i).transpose(), s.Phi));
      }
      return v;
    }
    const Mat D = A_.diag().asDiagonal();
    const Mat N = null_space(s.Phi.transpose() * D);
    if (N.cols() == 0) return 0.0;
    return spectral_norm(X_.scale().asDiagonal() * D * N);
  }
  double point_value(const Vec& psi, const State& s) const override {
    return distance_to_span(sigma_, psi, s.Phi);
  }
  double step_value(Vec& psi, const State& s) const override {
    const BestApproximation ba = best_approximation(sigma_, psi, s.Phi);
    if (ba.value > 0.0) psi = X_.norming_functional(ba.certificate);
    return ba.value;
  }
  std::vector<Vec> starts(std::mt19937_64& rng) const override {
    std::vector<Vec> out;
    const int d = A_.dim();
    for (int j = 0; j < d; ++j) out.push_back(X_.norming_functional(Vec::Unit(d, j)));
    for (int r = 0; r < random_starts_; ++r) {
      const Vec g = gaussian(rng, d);
      out.push_back(g / X_.dual_value(g));
    }
    return out;
  }

 private:
  Norm sigma_;
  Mat facets_;
};

class LinearInner : public Inner {
 public:
  LinearInner(const CompactBody& A, const Norm& X, int random_starts)
      : Inner(A, X, random_starts) {
    if (X.polyhedral()) facets_ = half_facets(X);
  }
  bool exact() const override {
    return X_.polyhedral() || A_.polytope() || (X_.hilbert() && A_.p() == 2.0);
  }
  static Mat residual_map(const State& s) {
    const int d = static_cast<int>(s.U.rows());
    Mat M = Mat::Identity(d, d);
    if (s.U.cols() > 0) M -= s.U * s.Phi.transpose();
    return M;
  }
  double exact_value(const State& s) const override {
    const Mat M = residual_map(s);
    if (X_.polyhedral()) {
      double v = 0.0;
      const Mat G = facets_ * M;
      for (Eigen::Index i = 0; i < G.rows(); ++i) {
        v = std::max(v, A_.support(G.row(i).transpose()));
      }
      return v;
    }
    if (A_.polytope()) {
      double v = 0.0;
      for (const Vec& x : A_.vertices()) v = std::max(v, X_.value(M * x));
      return v;
    }
    return spectral_norm(X_.scale().asDiagonal() * M * A_.diag().asDiagonal());
  }
  double point_value(const Vec& x, const State& s) const override {
    return X_.value(residual_map(s) * x);
  }
  double step_value(Vec& x, const State& s) const override {
    const Mat M = residual_map(s);
    const Vec r = M * x;
    const double v = X_.value(r);
    if (v > 0.0) x = A_.support_point(M.transpose() * X_.norming_functional(r));
    return v;
  }
  std::vector<Vec> starts(std::mt19937_64& rng) const override { return body_starts(rng); }

 private:
  Mat facets_;
};

std::unique_ptr<Inner> make_inner(Kind kind, const CompactBody& A, const Norm& X, int rs) {
  switch (kind) {
    case Kind::Kolmogorov: return std::make_unique<KolmogorovInner>(A, X, rs);
    case Kind::Gelfand: return std::make_unique<GelfandInner>(A, X, rs);
    case Kind::Linear: return std::make_unique<LinearInner>(A, X, rs);
  }
  return nullptr;
}

// Grassmann chart around an orthogonal Q: span(Q1 + Q2 B).
struct Chart {
  Kind kind;
  int d;
  int n;
  Mat Q;

  int size() const {
    const int g = n * (d - n);
    return kind == Kind::Linear ? g + d * n : g;
  }
  Mat point(const Vec& theta) const {
    const Eigen::Map<const Mat> B(theta.data(), d - n, n);
    return Q.leftCols(n) + Q.rightCols(d - n) * B;
  }
  State decode(const Vec& theta) const {
    State s;
    const Mat P = point(theta);
    if (kind == Kind::Gelfand) {
      s.Phi = P;
    } else {
      s.U = P;
    }
    if (kind == Kind::Linear) {
      s.Phi = Eigen::Map<const Mat>(theta.data() + n * (d - n), d, n);
    }
    return s;
  }
};

Chart chart_at(Kind kind, const State& s) {
  const Mat& B = kind == Kind::Gelfand ? s.Phi : s.U;
  return Chart{kind, static_cast<int>(B.rows()), static_cast<int>(B.cols()), full_orthogonal(B)};
}

Vec encode(const Chart& c, const State& s) {
  Vec theta = Vec::Zero(c.size());
  if (c.kind == Kind::Linear) {
    // Same operator with U replaced by Q1: Phi_c = Phi R^T, R = Q1^T U.
    const Mat R = c.Q.leftCols(c.n).transpose() * s.U;
    const Mat Phic = s.Phi * R.transpose();
    Eigen::Map<Mat>(theta.data() + c.n * (c.d - c.n), c.d, c.n) = Phic;
  }
  return theta;
}

struct Outcome {
  double value = std::numeric_limits<double>::infinity();
  State state;
  bool exhausted = false;
};

// Adds up to `limit` distinct maxima whose value exceeds `above`.
void add_points(std::vector<Vec>& W, const Maxima& m, double above, std::size_t limit) {
  std::size_t added = 0;
  for (const auto& [v, w] : m) {
    if (added >= limit) break;
    if (!(v > above)) continue;
    bool dup = false;
    for (const Vec& u : W) {
      if ((u - w).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + w.cwiseAbs().maxCoeff())) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      W.push_back(w);
      ++added;
    }
  }
}

Outcome run_restart(const Inner& inner, Kind kind, const State& init, const SearchOptions& opts,
                    std::uint64_t seed) {
  Outcome out;
  Chart chart = chart_at(kind, init);
  Vec theta = encode(chart, init);
  std::vector<Vec> W;
  const bool exact = inner.exact();
  if (!exact) {
    const Maxima m0 = inner.ascend(chart.decode(theta), {}, seed);
    add_points(W, m0, m0.front().first * (1.0 - 1e-3), 3);
  }

  NelderMeadOptions nm;
  nm.max_evals = opts.max_evals;
  nm.ftol = 1e-10;
  nm.xtol = 1e-8;
  const int rounds = exact ? 1 : std::max(1, opts.exchange_rounds);
  bool closed = exact;
  for (int round = 0; round < rounds; ++round) {
    auto f = [&](const Vec& th) {
      const State s = chart.decode(th);
      if (exact) return inner.exact_value(s);
      double v = 0.0;
      for (const Vec& w : W) v = std::max(v, inner.tracked_value(w, s, opts.track_steps));
      return v;
    };
    double fcur = f(theta);
    bool nm_exhausted = false;
    for (int rc = 0; rc < std::max(1, opts.recenter); ++rc) {
      const NelderMeadResult res = nelder_mead(f, theta, nm);
      nm_exhausted = !res.converged;
      const bool improved = res.f < fcur - 1e-9 * std::abs(fcur);
      if (res.f < fcur) {
        const State s = chart.decode(res.x);
        chart = chart_at(kind, s);
        theta = encode(chart, s);
        fcur = res.f;
      }
      if (!improved) break;
    }
    const State s = chart.decode(theta);
    double vtrue = fcur;
    Maxima m;
    if (!exact) {
      const std::size_t keep = std::min<std::size_t>(W.size(), 8);
      std::vector<Vec> warm(W.end() - static_cast<std::ptrdiff_t>(keep), W.end());
      m = inner.ascend(s, warm, mix_seed(seed, static_cast<std::uint64_t>(round) + 1));
      vtrue = m.front().first;
    }
    if (vtrue < out.value) {
      out.value = vtrue;
      out.state = s;
      out.exhausted = nm_exhausted;
    }
    if (exact) break;
    if (vtrue <= fcur * (1.0 + opts.exchange_tol) + 1e-15) {
      closed = true;
      break;
    }
    add_points(W, m, fcur * (1.0 + opts.exchange_tol), 2);
  }
  if (!closed) out.exhausted = true;
  return out;
}

std::vector<std::vector<int>> coordinate_subsets(int d, int n, std::size_t limit) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (out.size() < limit) {
    out.push_back(idx);
    int i = n - 1;
    while (i >= 0 && idx[i] == d - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Mat coordinate_matrix(int d, const std::vector<int>& idx) {
  Mat M = Mat::Zero(d, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) M(idx[k], static_cast<Eigen::Index>(k)) = 1.0;
  return M;
}

std::vector<State> initial_states(Kind kind, int d, int n, const SearchOptions& opts,
                                  const std::vector<State>& extra) {
  std::vector<State> out = extra;
  const std::size_t total = std::max<std::size_t>(static_cast<std::size_t>(opts.restarts),
                                                  extra.size() + 1);
  const std::size_t room = total - std::min(total, out.size());
  const std::size_t nsub = std::min<std::size_t>(room, std::max<std::size_t>(1, (room + 1) / 2));
  for (const auto& idx : coordinate_subsets(d, n, nsub)) {
    const Mat E = coordinate_matrix(d, idx);
    State s;
    if (kind != Kind::Gelfand) s.U = E;
    if (kind != Kind::Kolmogorov) s.Phi = E;
    out.push_back(s);
  }
  std::mt19937_64 rng(mix_seed(opts.seed, 0x5eed));
  while (out.size() < total) {
    Mat G(d, n);
    for (int j = 0; j < n; ++j) G.col(j) = gaussian(rng, d);
    const Mat E = orthonormal_basis(G);
    State s;
    if (kind != Kind::Gelfand) s.U = E;
    if (kind != Kind::Kolmogorov) s.Phi = E;
    out.push_back(s);
  }
  return out;
}

Outcome search(Kind kind, const CompactBody& A, const Norm& X, int n, const SearchOptions& opts,
               const std::vector<State>& extra) {
  const auto inner = make_inner(kind, A, X, opts.inner_random_starts);
  const std::vector<State> init = initial_states(kind, A.dim(), n, opts, extra);
  const std::function<Outcome(int)> job = [&](int i) {
    return run_restart(*inner, kind, init[static_cast<std::size_t>(i)], opts,
                       mix_seed(opts.seed, static_cast<std::uint64_t>(i)));
  };
  const std::vector<Outcome> results = parallel_map<Outcome>(static_cast<int>(init.size()), job);
  Outcome best;
  for (const Outcome& o : results) {
    if (o.value < best.value) best = o;
  }
  return best;
}

void check_instance(const CompactBody& A, const Norm& X, int n) {
  if (A.dim() != X.dim()) throw std::invalid_argument("width search: dimension mismatch");
  if (n < 0) throw std::invalid_argument("width search: n must be >= 0");
  if (A.dim() > 16) throw std::invalid_argument("width search: dimension too large");
}

// Lower certificates for the normalized body; value and method tag.
std::pair<double, std::vector<std::string>> lower_certificate(const CompactBody& A, const Norm& X,
                                                              int n) {
  const int d = A.dim();
  if (n >= d) return {0.0, {}};
  const int k = n + 1;
  const double dk = static_cast<double>(k);
  const double ak = A.diag()(n);
  std::vector<std::string> tags;
  double best = 0.0;

  // Hilbert pair: singular values of S D.
  if (X.hilbert() && A.p() == 2.0) {
    std::vector<double> sv(d);
    for (int i = 0; i < d; ++i) sv[i] = X.scale()(i) * A.diag()(i);
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return {sv[n], {"svd-oracle"}};
  }

  const double p = A.p();
  const double cp = p == kInf ? 1.0 : std::min(1.0, std::pow(dk, 0.5 - 1.0 / p));
  const double ball = cp * X.euclidean_lower_constant(k) * ak;
  best = ball;
  tags.push_back("ball-inclusion");

  if (X.kind() == Norm::Kind::Lp) {
    // Adjoint l_{q'} -> l_{p'} with the same diagonal: B(X*) contains a
    // Euclidean ball of radius c_{q'} min s, and l_{p'} dominates m_{p'} l_2.
    const double qd = conjugate_exponent(X.p());
    const double pd = conjugate_exponent(p);
    const Vec& s = X.scale();
    const double cq = qd == kInf ? 1.0 : std::min(1.0, std::pow(dk, 0.5 - 1.0 / qd));
    const double smin = s.head(k).minCoeff();
    const double mp = pd <= 2.0 ? 1.0 : (pd == kInf ? std::pow(dk, -0.5) : std::pow(dk, 1.0 / pd - 0.5));
    const double dual = cq * smin * mp * ak;
    if (dual > best * (1.0 + 1e-12)) {
      best = dual;
      tags = {"duality-transfer"};
    } else if (dual >= best * (1.0 - 1e-12)) {
      tags.push_back("duality-transfer");
    }
  }
  return {best, tags};
}

WidthEstimate finish_estimate(int n, double upper, double lower, std::vector<std::string> method,
                              bool exhausted) {
  WidthEstimate e;
  e.n = n;
  e.upper = upper;
  e.raw_upper = upper;
  e.method = std::move(method);
  e.budget_exhausted = exhausted;
  if (lower > upper) {
    if (lower - upper <= 1e-9 * lower) {
      lower = upper;
    } else {
      e.method.push_back("lower-bound-conflict");
      lower = upper;
    }
  }
  e.lower = lower;
  e.certified = upper > 0.0 ? (upper - lower) <= 1e-9 * upper : true;
  return e;
}

WidthEstimate trivial_estimate(int n, double value, const std::string& tag) {
  WidthEstimate e;
  e.n = n;
  e.lower = e.upper = e.raw_upper = value;
  e.method = {tag};
  e.certified = true;
  return e;
}

std::vector<State> wrap_seeds(Kind kind, const std::vector<Mat>& seeds, int n) {
  std::vector<State> out;
  for (const Mat& M : seeds) {
    if (M.cols() != n) continue;
    State s;
    if (kind == Kind::Gelfand) {
      s.Phi = orthonormal_basis(M);
    } else {
      s.U = orthonormal_basis(M);
    }
    out.push_back(s);
  }
  return out;
}

SubspaceResult subspace_search(Kind kind, const CompactBody& A, const Norm& X, int n,
                               const SearchOptions& opts, const std::vector<Mat>& seeds) {
  check_instance(A, X, n);
  const int d = A.dim();
  SubspaceResult r;
  if (n >= d) {
    r.estimate = trivial_estimate(n, 0.0, "full-rank");
    r.basis = Mat::Identity(d, d);
    return r;
  }
  if (n == 0) {
    r.estimate = trivial_estimate(0, radius(A, X), "radius");
    r.estimate.certified = X.polyhedral() || A.polytope() || (X.hilbert() && A.p() == 2.0);
    r.basis = Mat(d, 0);
    return r;
  }
  const Normalized nb = normalize(A);
  const Outcome o = search(kind, nb.A, X, n, opts, wrap_seeds(kind, seeds, n));
  auto [lower, tags] = lower_certificate(nb.A, X, n);
  tags.insert(tags.begin(), "subspace-search");
  r.estimate = finish_estimate(n, o.value * nb.scale, lower * nb.scale, tags, o.exhausted);
  r.basis = orthonormal_basis(kind == Kind::Gelfand ? o.state.Phi : o.state.U);
  return r;
}

}  // namespace

std::string WidthEstimate::method_string() const {
  std::string s;
  for (std::size_t i = 0; i < method.size(); ++i) {
    if (i) s += '+';
    s += method[i];
  }
  return s;
}

DiagonalOperator::DiagonalOperator(Vec e, double p_, double q_)
    : entries(std::move(e)), p(p_), q(q_) {
  if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw std::invalid_argument("diagonal operator: p, q must lie in (1, inf)");
  }
  (void)body();
}

CompactBody DiagonalOperator::body() const { return CompactBody(p, entries); }
Norm DiagonalOperator::target() const { return Norm::lp(q, dim()); }

WidthEstimate svd_oracle(const DiagonalOperator& u, int n) {
  if (u.p != 2.0 || u.q != 2.0) throw std::invalid_argument("svd_oracle: requires p = q = 2");
  if (n < 0) throw std::invalid_argument("svd_oracle: n must be >= 0");
  const double v = n >= u.dim() ? 0.0 : u.entries(n);
  return trivial_estimate(n, v, "svd-oracle");
}

double kolmogorov_value(const CompactBody& A, const Norm& X, const Mat& U) {
  const Normalized nb = normalize(A);
  KolmogorovInner inner(nb.A, X, 3);
  return inner.true_value(State{U, Mat()}, 1) * nb.scale;
}

double gelfand_value(const CompactBody& A, const Norm& X, const Mat& Phi) {
  const Normalized nb = normalize(A);
  GelfandInner inner(nb.A, X, 3);
  return inner.true_value(State{Mat(), Phi}, 1) * nb.scale;
}

double linear_value(const CompactBody& A, const Norm& X, const Mat& U, const Mat& Phi) {
  const Normalized nb = normalize(A);
  LinearInner inner(nb.A, X, 3);
  return inner.true_value(State{U, Phi}, 1) * nb.scale;
}

double radius(const CompactBody& A, const Norm& X) {
  const int d = A.dim();
  return linear_value(A, X, Mat(d, 0), Mat(d, 0));
}

WidthEstimate certificate_lower_bound(const CompactBody& A, const Norm& X, int n) {
  check_instance(A, X, n);
  if (n >= A.dim()) return trivial_estimate(n, 0.0, "full-rank");
  const Normalized nb = normalize(A);
  auto [v, tags] = lower_certificate(nb.A, X, n);
  WidthEstimate e;
  e.n = n;
  e.lower = v * nb.scale;
  e.upper = e.raw_upper = std::numeric_limits<double>::infinity();
  e.method = tags;
  return e;
}

SubspaceResult kolmogorov_search(const CompactBody& A, const Norm& X, int n,
                                 const SearchOptions& opts, const std::vector<Mat>& extra_seeds) {
  return subspace_search(Kind::Kolmogorov, A, X, n, opts, extra_seeds);
}

SubspaceResult gelfand_search(const CompactBody& A, const Norm& X, int n,
                              const SearchOptions& opts, const std::vector<Mat>& extra_seeds) {
  return subspace_search(Kind::Gelfand, A, X, n, opts, extra_seeds);
}

LinearResult linear_search(const CompactBody& A, const Norm& X, int n, const SearchOptions& opts,
                           const SubspaceResult* kolmogorov, const SubspaceResult* gelfand) {
  check_instance(A, X, n);
  const int d = A.dim();
  LinearResult r;
  if (n >= d) {
    r.estimate = trivial_estimate(n, 0.0, "full-rank");
    r.U = r.Phi = Mat::Identity(d, d);
    return r;
  }
  if (n == 0) {
    r.estimate = trivial_estimate(0, radius(A, X), "radius");
    r.estimate.certified = X.polyhedral() || A.polytope() || (X.hilbert() && A.p() == 2.0);
    r.U = r.Phi = Mat(d, 0);
    return r;
  }
  std::vector<State> extra;
  auto add = [&](const Mat& U, const Mat& Phi) {
    // Oblique projector onto span U along ker Phi^T.
    const Mat G = U.transpose() * Phi;
    Eigen::FullPivLU<Mat> lu(G);
    if (!lu.isInvertible()) return;
    extra.push_back(State{U, Phi * lu.inverse()});
  };
  if (kolmogorov && kolmogorov->basis.cols() == n) {
    add(kolmogorov->basis, kolmogorov->basis);
    if (gelfand && gelfand->basis.cols() == n) add(kolmogorov->basis, gelfand->basis);
  }
  if (gelfand && gelfand->basis.cols() == n) add(gelfand->basis, gelfand->basis);

  const Normalized nb = normalize(A);
  const Outcome o = search(Kind::Linear, nb.A, X, n, opts, extra);
  auto [lower, tags] = lower_certificate(nb.A, X, n);
  tags.insert(tags.begin(), "operator-search");
  r.estimate = finish_estimate(n, o.value * nb.scale, lower * nb.scale, tags, o.exhausted);
  r.U = o.state.U;
  r.Phi = o.state.Phi;
  return r;
}

WidthTriple compute_widths(const CompactBody& A, const Norm& X, int n, const SearchOptions& opts) {
  WidthTriple t;
  t.kolmogorov = kolmogorov_search(A, X, n, opts);
  t.gelfand = gelfand_search(A, X, n, opts);
  t.linear = linear_search(A, X, n, opts, &t.kolmogorov, &t.gelfand);
  if (n <= 0 || n >= A.dim()) return t;
  // The range of P bounds d_n and its kernel bounds d^n by lambda_n.
  const double kv = kolmogorov_value(A, X, t.linear.U);
  if (kv < t.kolmogorov.estimate.upper) {
    WidthEstimate& e = t.kolmogorov.estimate;
    e.upper = e.raw_upper = std::max(kv, e.lower);
    e.certified = (e.upper - e.lower) <= 1e-9 * e.upper;
    e.method.push_back("linear-seeded");
    t.kolmogorov.basis = orthonormal_basis(t.linear.U);
  }
  const double gv = gelfand_value(A, X, t.linear.Phi);
  if (gv < t.gelfand.estimate.upper) {
    WidthEstimate& e = t.gelfand.estimate;
    e.upper = e.raw_upper = std::max(gv, e.lower);
    e.certified = (e.upper - e.lower) <= 1e-9 * e.upper;
    e.method.push_back("linear-seeded");
    t.gelfand.basis = orthonormal_basis(t.linear.Phi);
  }
  return t;
}

WidthEstimate cowidth(const CompactBody& A, const Norm& X, int n, const SearchOptions& opts) {
  WidthEstimate e = gelfand_search(A, X, n, opts).estimate;
  e.lower *= 2.0;
  e.upper *= 2.0;
  e.raw_upper *= 2.0;
  e.method.push_back("cowidth");
  return e;
}

DiagonalOperator adjoint(const DiagonalOperator& u) {
  return DiagonalOperator(u.entries, conjugate_exponent(u.q), conjugate_exponent(u.p));
}

std::vector<SuiteCase> operator_suite(std::uint64_t seed, int count, int dim,
                                      const std::vector<double>& exps, const std::vector<int>& ns,
                                      double lo) {
  if (count < 0 || dim < 1 || exps.empty() || ns.empty() || !(lo > 0.0 && lo <= 1.0)) {
    throw std::invalid_argument("operator_suite: bad parameters");
  }
  std::mt19937_64 rng(mix_seed(seed, 0xd0a1));
  std::uniform_real_distribution<double> unif(lo, 1.0);
  const std::size_t k = exps.size();
  std::vector<SuiteCase> out;
  for (int i = 0; i < count; ++i) {
    Vec e(dim);
    for (int j = 0; j < dim; ++j) e(j) = unif(rng);
    std::sort(e.data(), e.data() + dim, std::greater<>());
    const std::size_t u = static_cast<std::size_t>(i);
    out.push_back({DiagonalOperator(e, exps[u % k], exps[(u / k) % k]), ns[(u / (k * k)) % ns.size()]});
  }
  return out;
}

DualityReport duality_check(const DiagonalOperator& u, int n, const SearchOptions& opts) {
  const DiagonalOperator ua = adjoint(u);
  const WidthTriple tu = compute_widths(u.body(), u.target(), n, opts);
  const WidthTriple ta = compute_widths(ua.body(), ua.target(), n, opts);
  DualityReport r;
  r.n = n;
  r.gelfand_u = tu.gelfand.estimate;
  r.kolmogorov_adjoint = ta.kolmogorov.estimate;
  r.linear_u = tu.linear.estimate;
  r.linear_adjoint = ta.linear.estimate;
  auto gap = [](double a, double b) {
    const double m = std::max(a, b);
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
  };
  r.gelfand_gap = gap(r.gelfand_u.upper, r.kolmogorov_adjoint.upper);
  r.linear_gap = gap(r.linear_u.upper, r.linear_adjoint.upper);
  return r;
}

double class_lower_bound(const FunctionClass& cls, double q, int n) {
  const int m = n + 1;
  double lam = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= m; ++k) lam = std::min(lam, std::abs(cls.multiplier.at(k)));
  const double dm = static_cast<double>(m);
  const double p = cls.p;
  // ||g||_2 <= C1 ||g||_q and ||phi||_p <= C2 ||phi||_2 for mean-zero
  // trigonometric polynomials of degree m.
  const double c1 = q <= 2.0 ? std::pow(dm / kPi, 1.0 / q - 0.5) : std::pow(2.0 * kPi, 0.5 - 1.0 / q);
  const double c2 = p <= 2.0 ? std::pow(2.0 * kPi, 1.0 / p - 0.5) : std::pow(dm / kPi, 0.5 - 1.0 / p);
  return lam / (c1 * c2);
}

namespace {

Vec duality_map(const Vec& g, double r) {
  // J_r(g) = |g|^{r-1} sign(g) / ||g||_r^{r-1}, so <g, J_r g> = ||g||_r.
  const double ng = discrete_norm_any(g, r);
  Vec out = Vec::Zero(g.size());
  if (ng == 0.0) return out;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double a = std::abs(g(i)) / ng;
    out(i) = (g(i) >= 0 ? 1.0 : -1.0) * abs_pow(a, r - 1.0);
  }
  return out;
}

}  // namespace

WidthEstimate projection_upper_bound(const FunctionClass& cls, double q, int n,
                                     const ProjectionOptions& opts) {
  if (n < 0) throw std::invalid_argument("projection_upper_bound: n must be >= 0");
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw std::invalid_argument("projection_upper_bound: q must be in (1, inf)");
  }
  const int K = opts.K > 0 ? opts.K : std::max(8, 4 * n);
  const int N = opts.grid_N > 0 ? opts.grid_N : 4 * K;
  if (K <= n) throw std::invalid_argument("projection_upper_bound: K must exceed n");
  if (2 * K >= N) throw std::invalid_argument("projection_upper_bound: grid too coarse for K");

  WidthEstimate e;
  e.n = n;
  const double lower = class_lower_bound(cls, q, n);
  double tailmax = 0.0;
  for (int k = n + 1; k <= K; ++k) tailmax = std::max(tailmax, std::abs(cls.multiplier.at(k)));

  if (cls.p == 2.0 && q == 2.0) {
    e.upper = e.raw_upper = tailmax;
    e.lower = std::min(lower, tailmax);
    e.method = {"projection-bound", "closed-form", "duality-transfer"};
    e.certified = tailmax == 0.0 || (e.upper - e.lower) <= 1e-12 * e.upper;
    return e;
  }
  if (tailmax == 0.0) {
    e.method = {"projection-bound", "zero-tail"};
    e.certified = true;
    return e;
  }

  const SpectralMultiplier T = SpectralMultiplier::band(N, cls.multiplier, cls.beta, n, K);
  const double p = cls.p;
  const double pd = conjugate_exponent(p);
  const double qd = conjugate_exponent(q);
  const Grid grid = make_grid(N);

  std::vector<Vec> starts;
  Vec delta = Vec::Zero(N);
  delta(0) = 1.0;
  starts.push_back(delta);
  Vec wave(N);
  for (int j = 0; j < N; ++j) wave(j) = std::cos((n + 1) * grid.nodes[j]);
  starts.push_back(wave);
  std::mt19937_64 rng(mix_seed(opts.seed, static_cast<std::uint64_t>(n)));
  for (int r = 0; r < opts.random_starts; ++r) starts.push_back(gaussian(rng, N));

  double best = 0.0;
  bool exhausted = false;
  for (Vec phi : starts) {
    phi /= discrete_norm_any(phi, p);
    double v = discrete_norm_any(T.apply(phi), q);
    int it = 0;
    for (; it < opts.max_iter; ++it) {
      const Vec g = T.apply(phi);
      const Vec h = T.apply_adjoint(duality_map(g, q));
      if (discrete_norm_any(h, pd) == 0.0) break;
      Vec next = duality_map(h, pd);
      next /= discrete_norm_any(next, p);
      const double v2 = discrete_norm_any(T.apply(next), q);
      if (!(v2 > v)) break;
      const bool small = v2 - v <= 1e-12 * v2;
      phi = std::move(next);
      v = v2;
      if (small) break;
    }
    if (it == opts.max_iter) exhausted = true;
    best = std::max(best, v);
  }
  (void)qd;
  e.upper = e.raw_upper = best;
  e.lower = std::min(lower, best);
  e.method = {"projection-bound", "power-iteration", "duality-transfer"};
  e.budget_exhausted = exhausted;
  e.certified = false;
  return e;
}

void enforce_monotone(std::vector<WidthEstimate>& estimates) {
  std::stable_sort(estimates.begin(), estimates.end(),
                   [](const WidthEstimate& a, const WidthEstimate& b) { return a.n < b.n; });
  double run = std::numeric_limits<double>::infinity();
  for (WidthEstimate& e : estimates) {
    e.raw_upper = e.upper;
    run = std::min(run, e.upper);
    e.upper = run;
    e.monotone_violation = e.lower > e.upper * (1.0 + 1e-12);
  }
}

}  // namespace nwidths
