#include "nwidths/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "nwidths/best_approx.hpp"
#include "nwidths/optimize.hpp"

namespace nwidths {

double ExtensionSpace::norm(const Vec& x, const Vec& t) const {
  if (x.size() != sample.cols()) throw std::invalid_argument("extension norm: dimension mismatch");
  Vec v = sample * x;
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    v += t(k) * ext_functions[static_cast<std::size_t>(k)].table;
  }
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

OptimalFunctionals optimal_functionals(const CompactBody& A, const Norm& X, int n, double eps,
                                       const SearchOptions& opts) {
  OptimalFunctionals out;
  const SubspaceResult g = gelfand_search(A, X, n, opts);
  out.gelfand = g.estimate;
  out.Phi = g.basis;
  out.target = g.estimate.upper * (1.0 + eps);
  out.achieved = n == 0 ? radius(A, X) : gelfand_value(A, X, out.Phi);
  return out;
}

Vec best_approx_coeffs(const Vec& phi, const Mat& basis, const CompactBody& A) {
  if (basis.cols() == 0) return Vec::Zero(0);
  Eigen::FullPivLU<Mat> lu(basis);
  lu.setThreshold(1e-12);
  if (lu.rank() < basis.cols()) throw std::invalid_argument("best_approx_coeffs: dependent basis");
  return best_approximation(A.support_norm(), phi, basis, TieBreak::MinEuclidean).coeffs;
}

Mat coefficient_tables(const CompactBody& A, const Mat& basis, const Mat& sample) {
  const int S = static_cast<int>(sample.rows());
  const int n = static_cast<int>(basis.cols());
  const std::function<Vec(int)> job = [&](int s) {
    return best_approx_coeffs(sample.row(s).transpose(), basis, A);
  };
  const std::vector<Vec> rows = parallel_map<Vec>(S, job);
  Mat C(S, n);
  for (int s = 0; s < S; ++s) C.row(s) = rows[static_cast<std::size_t>(s)].transpose();
  return C;
}

CoefficientFunction linearity_filter(const Vec& table, const Mat& sample, double tol) {
  CoefficientFunction c;
  c.table = table;
  c.linear_part = sample.completeOrthogonalDecomposition().solve(table);
  const double sup = table.size() ? table.cwiseAbs().maxCoeff() : 0.0;
  c.deviation = table.size() ? (sample * c.linear_part - table).cwiseAbs().maxCoeff() : 0.0;
  c.linear = c.deviation <= tol * sup;
  return c;
}

ExtensionSpace build_extension(const Norm& base, const Mat& sample,
                               std::vector<CoefficientFunction> coeffs) {
  if (sample.cols() != base.dim()) throw std::invalid_argument("build_extension: dimension mismatch");
  for (const auto& c : coeffs) {
    if (c.table.size() != sample.rows()) {
      throw std::invalid_argument("build_extension: table length differs from sample size");
    }
  }
  if (base.polyhedral()) {
    const Mat F = base.polytope_facets();
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
      bool found = false;
      for (Eigen::Index s = 0; s < sample.rows() && !found; ++s) {
        found = (sample.row(s) - F.row(i)).cwiseAbs().maxCoeff() <= 1e-12;
      }
      if (!found) {
        throw std::invalid_argument("build_extension: sample misses a vertex of the dual ball");
      }
    }
  }
  ExtensionSpace e;
  e.base = base;
  e.sample = sample;
  e.ext_functions = std::move(coeffs);
  e.n_ext = 0;
  for (const auto& c : e.ext_functions) {
    if (!c.linear) ++e.n_ext;
  }
  return e;
}

namespace {

// max_s sigma_A(row_s of R).
double max_support_rows(const CompactBody& A, const Mat& R) {
  double v = 0.0;
  for (Eigen::Index s = 0; s < R.rows(); ++s) v = std::max(v, A.support(R.row(s).transpose()));
  return v;
}

Mat table_matrix(const ExtensionSpace& ext) {
  const Eigen::Index S = ext.sample.rows();
  Mat C(S, static_cast<Eigen::Index>(ext.ext_functions.size()));
  for (std::size_t k = 0; k < ext.ext_functions.size(); ++k) {
    C.col(static_cast<Eigen::Index>(k)) = ext.ext_functions[k].table;
  }
  return C;
}

double extension_value_raw(const CompactBody& A, const Mat& sample, const Mat& C, const Mat& Phi) {
  if (Phi.cols() == 0) return max_support_rows(A, sample);
  return max_support_rows(A, sample - C * Phi.transpose());
}

struct Level {
  Mat Y;   // d x n
  Vec s;   // m scalars
  double value = std::numeric_limits<double>::infinity();
};

// Intermediate level m: slots k < m use s_k c_k + j(y_k), the rest j(y_k).
Level search_level(const CompactBody& A, const Mat& sample, const Mat& C, const Mat& Phi, int m,
                   const std::vector<Level>& starts, int max_evals) {
  const int d = static_cast<int>(Phi.rows());
  const int n = static_cast<int>(Phi.cols());
  auto unpack = [&](const Vec& th, Mat& Y, Vec& s) {
    Y = Eigen::Map<const Mat>(th.data(), d, n);
    s = th.tail(m);
  };
  auto value = [&](const Vec& th) {
    Mat Y;
    Vec s;
    unpack(th, Y, s);
    Mat Z = sample * Y;
    for (int k = 0; k < m; ++k) Z.col(k) += s(k) * C.col(k);
    return max_support_rows(A, sample - Z * Phi.transpose());
  };
  Level best;
  NelderMeadOptions nm;
  nm.max_evals = max_evals;
  nm.initial_step = 0.1;
  for (const Level& st : starts) {
    Vec th(d * n + m);
    Eigen::Map<Mat>(th.data(), d, n) = st.Y;
    th.tail(m) = st.s;
    double f = value(th);
    for (int rep = 0; rep < 3; ++rep) {
      const NelderMeadResult r = nelder_mead(value, th, nm);
      if (!(r.f < f - 1e-13 * std::abs(f))) {
        if (r.f < f) {
          th = r.x;
          f = r.f;
        }
        break;
      }
      th = r.x;
      f = r.f;
    }
    if (f < best.value) {
      unpack(th, best.Y, best.s);
      best.value = f;
    }
  }
  return best;
}

WidthEstimate chain_entry(int n, double upper, double lower, const std::string& tag) {
  WidthEstimate e;
  e.n = n;
  e.upper = e.raw_upper = upper;
  e.lower = std::min(lower, upper);
  e.method = {tag};
  e.certified = upper > 0.0 ? (upper - e.lower) <= 1e-9 * upper : true;
  return e;
}

}  // namespace

WidthEstimate extension_width_value(const CompactBody& A, const ExtensionSpace& ext,
                                    const Mat& Phi) {
  if (static_cast<Eigen::Index>(ext.ext_functions.size()) != Phi.cols()) {
    throw std::invalid_argument("extension_width_value: extension not built from these functionals");
  }
  WidthEstimate e;
  e.n = static_cast<int>(Phi.cols());
  e.upper = e.raw_upper = extension_value_raw(A, ext.sample, table_matrix(ext), Phi);
  e.lower = 0.0;
  e.method = {"extension"};
  return e;
}

ChainReport preabsolute_chain(const CompactBody& A, const Norm& X, int n, const ChainOptions& opts) {
  if (n < 0 || n > A.dim()) throw std::invalid_argument("preabsolute_chain: bad n");
  ChainReport rep;
  const int d = A.dim();
  if (n == 0) {
    const double r = radius(A, X);
    rep.chain.push_back(chain_entry(0, r, r, "radius"));
    rep.extension_value = r;
    rep.Phi = Mat(d, 0);
    DualSampleOptions so{opts.sample_size, opts.sample_seed, true};
    rep.extension = build_extension(X, dual_ball_sample(X, so), {});
    return rep;
  }
  rep.widths = compute_widths(A, X, n, opts.search);
  const WidthEstimate& lin = rep.widths.linear.estimate;
  const WidthEstimate& gel = rep.widths.gelfand.estimate;
  rep.Phi = rep.widths.gelfand.basis;

  DualSampleOptions so{opts.sample_size, opts.sample_seed, true};
  const Mat sample = dual_ball_sample(X, so);
  const Mat C = coefficient_tables(A, rep.Phi, sample);
  std::vector<CoefficientFunction> coeffs;
  for (int k = 0; k < n; ++k) coeffs.push_back(linearity_filter(C.col(k), sample, opts.linearity_tol));
  rep.extension = build_extension(X, sample, coeffs);
  rep.nonlinear = rep.extension.n_ext;
  rep.extension_value = extension_width_value(A, rep.extension, rep.Phi).upper;

  DualSampleOptions so2 = so;
  so2.size = 2 * opts.sample_size;
  const Mat sample2 = dual_ball_sample(X, so2);
  const Mat C2 = coefficient_tables(A, rep.Phi, sample2);
  rep.slack = std::max(0.0, extension_value_raw(A, sample2, C2, rep.Phi) - rep.extension_value);

  const double lower = gel.lower;
  rep.chain.push_back(chain_entry(0, lin.upper, lower, "linear-search"));

  // Candidate bases: Gelfand functionals and the linear optimum's functionals.
  struct Basis {
    Mat Phi;
    Mat C;
    std::vector<CoefficientFunction> coeffs;
    Level prev;
  };
  std::vector<Basis> bases;
  bases.push_back({rep.Phi, C, coeffs, Level{}});
  {
    const Mat& Ul = rep.widths.linear.U;
    const Mat& Pl = rep.widths.linear.Phi;
    Eigen::FullPivLU<Mat> lu(Pl);
    if (Pl.cols() == n && lu.rank() == n) {
      Basis b;
      b.Phi = Pl;
      b.C = coefficient_tables(A, Pl, sample);
      for (int k = 0; k < n; ++k) {
        b.coeffs.push_back(linearity_filter(b.C.col(k), sample, opts.linearity_tol));
      }
      b.prev.Y = Ul;
      b.prev.s = Vec::Zero(0);
      bases.push_back(std::move(b));
    }
  }
  for (Basis& b : bases) {
    if (b.prev.Y.size() == 0) {
      // Start from the linear parts of the coefficient functions.
      b.prev.Y = Mat::Zero(d, n);
      for (int k = 0; k < n; ++k) b.prev.Y.col(k) = b.coeffs[static_cast<std::size_t>(k)].linear_part;
      b.prev.s = Vec::Zero(0);
    }
  }

  for (int m = 1; m < n; ++m) {
    const double prev = rep.chain.back().upper;
    bool trivial = true;
    for (const Basis& b : bases) {
      for (int k = 0; k < m; ++k) trivial = trivial && b.coeffs[static_cast<std::size_t>(k)].linear;
    }
    if (trivial) {
      WidthEstimate e = rep.chain.back();
      e.method = {"trivial-extension"};
      rep.chain.push_back(e);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (Basis& b : bases) {
      std::vector<Level> starts;
      Level warm = b.prev;
      Vec s = Vec::Zero(m);
      s.head(warm.s.size()) = warm.s;
      warm.s = s;
      starts.push_back(warm);
      Level thm;
      thm.Y = Mat::Zero(d, n);
      for (int k = m; k < n; ++k) thm.Y.col(k) = b.coeffs[static_cast<std::size_t>(k)].linear_part;
      thm.s = Vec::Ones(m);
      starts.push_back(thm);
      const Level lv = search_level(A, sample, b.C, b.Phi, m, starts, opts.max_evals);
      b.prev = lv;
      best = std::min(best, lv.value);
    }
    if (best < prev) {
      rep.chain.push_back(chain_entry(m, best, lower, "extension-search"));
    } else {
      WidthEstimate e = rep.chain.back();
      e.n = m;
      e.method = {"inherited"};
      rep.chain.push_back(e);
    }
  }
  const double prev = rep.chain.back().upper;
  if (rep.extension_value <= prev) {
    rep.chain.push_back(chain_entry(n, rep.extension_value, lower, "extension"));
  } else {
    WidthEstimate e = rep.chain.back();
    e.method = {"inherited"};
    rep.chain.push_back(e);
  }
  for (std::size_t m = 0; m < rep.chain.size(); ++m) rep.chain[m].n = n;
  return rep;
}

RankOneCertificate certify_rank_one_gap(const CompactBody& A, const Norm& X, double rel_tol,
                                        long max_cells) {
  if (A.p() != 1.0) throw std::invalid_argument("certify_rank_one_gap: A must be an l_1-ball image");
  if (X.kind() != Norm::Kind::Polytope) {
    throw std::invalid_argument("certify_rank_one_gap: X must be a polytope norm");
  }
  const int d = A.dim();
  const Vec& a = A.diag();
  const Mat F = X.polytope_facets();
  double MX = 0.0;
  for (Eigen::Index i = 0; i < F.rows(); ++i) MX = std::max(MX, F.row(i).cwiseAbs().sum());
  double Rmax = 0.0;
  for (int i = 0; i < d; ++i) Rmax = std::max(Rmax, X.dual_value(Vec::Unit(d, i)));
  const double rho = 1.0 / Rmax;
  double L = 0.0;
  for (int j = 0; j < d; ++j) L = std::max(L, a(j) * 2.0 * X.value(Vec::Unit(d, j)) * MX / rho);

  auto g = [&](const Vec& u) {
    Mat U(d, 1);
    U.col(0) = u;
    double v = 0.0;
    for (int j = 0; j < d; ++j) v = std::max(v, a(j) * distance_to_span(X, Vec::Unit(d, j), U));
    return v;
  };
  // A line through u with |u_face| = 1 = max |u_i|; coordinates of the other
  // entries are the cell variables.
  auto direction = [&](int face, const Vec& c) {
    Vec u(d);
    int k = 0;
    for (int i = 0; i < d; ++i) u(i) = i == face ? 1.0 : c(k++);
    return u;
  };

  struct Cell {
    double lb;
    double value;
    int face;
    Vec center;
    double h;
    bool operator<(const Cell& o) const { return lb > o.lb; }
  };
  std::priority_queue<Cell> heap;
  RankOneCertificate out;
  out.upper = std::numeric_limits<double>::infinity();
  auto push = [&](int face, const Vec& c, double h) {
    const Vec u = direction(face, c);
    const double v = g(u);
    if (v < out.upper) {
      out.upper = v;
      out.best_direction = u;
    }
    heap.push(Cell{v - L * h, v, face, c, h});
    ++out.cells;
  };
  for (int f = 0; f < d; ++f) push(f, Vec::Zero(d - 1), 1.0);
  const int children = 1 << (d - 1);
  while (!heap.empty()) {
    const Cell top = heap.top();
    if (top.lb >= out.upper - rel_tol * out.upper || out.cells >= max_cells) break;
    heap.pop();
    const double h2 = top.h / 2.0;
    for (int c = 0; c < children; ++c) {
      Vec ctr = top.center;
      for (int i = 0; i < d - 1; ++i) ctr(i) += ((c >> i) & 1) ? h2 : -h2;
      push(top.face, ctr, h2);
    }
  }
  out.lower = heap.empty() ? out.upper : std::max(0.0, heap.top().lb);

  SearchOptions so;
  so.restarts = 8;
  const SubspaceResult gr = gelfand_search(A, X, 1, so);
  out.gelfand = gr.estimate.upper;
  out.gelfand_certified = gr.estimate.certified;
  out.margin = out.lower - out.gelfand;
  return out;
}

}  // namespace nwidths
