#include "nwidths/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace nwidths {
namespace {

std::atomic<int> g_workers{1};

}  // namespace

void set_worker_count(int workers) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_workers.store(workers);
}

int worker_count() { return g_workers.load(); }

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                             const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evals = 1;
    res.converged = true;
    return res;
  }
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) {
    const double h = x0(i) != 0.0 ? opts.initial_step * std::max(1.0, std::abs(x0(i)))
                                   : opts.initial_step;
    pts[i + 1](i) += h;
  }
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (int i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  while (evals < opts.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    {
      std::vector<Vec> p2(n + 1);
      std::vector<double> f2(n + 1);
      for (int i = 0; i <= n; ++i) {
        p2[i] = pts[order[i]];
        f2[i] = fv[order[i]];
      }
      pts.swap(p2);
      fv.swap(f2);
    }
    double diam = 0.0;
    for (int i = 1; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    const double spread = fv[n] - fv[0];
    if (spread <= opts.ftol * (std::abs(fv[0]) + 1e-300) || diam <= opts.xtol) {
      res.converged = true;
      break;
    }
    if (diam <= 1e-15 * (1.0 + pts[0].cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= dn;

    const Vec xr = centroid + alpha * (centroid - pts[n]);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const Vec xe = centroid + beta * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
      continue;
    }
    if (fr < fv[n]) {
      const Vec xc = centroid + gamma * (xr - centroid);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[n] = xc;
        fv[n] = fc;
        continue;
      }
    } else {
      const Vec xc = centroid - gamma * (centroid - pts[n]);
      const double fc = eval(xc);
      if (fc < fv[n]) {
        pts[n] = xc;
        fv[n] = fc;
        continue;
      }
    }
    for (int i = 1; i <= n; ++i) {
      pts[i] = pts[0] + delta * (pts[i] - pts[0]);
      fv[i] = eval(pts[i]);
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  res.x = pts[best];
  res.f = fv[best];
  res.evals = evals;
  return res;
}

}  // namespace nwidths
