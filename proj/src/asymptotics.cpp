#include "nwidths/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "nwidths/optimize.hpp"

namespace nwidths {
namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line regress(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

std::string to_string(FitModel m) {
  return m == FitModel::PowerLaw ? "power-law" : "stretched-exponential";
}

SweepResult sweep(const FunctionClass& cls, double q, const std::vector<int>& n_list,
                  const SweepOptions& opts) {
  if (opts.estimator != "projection") {
    throw std::invalid_argument("sweep: unknown estimator '" + opts.estimator + "'");
  }
  SweepResult r;
  r.cls = cls;
  r.q = q;
  r.n_list = n_list;
  std::ostringstream os;
  os << "lambda=" << cls.multiplier.describe() << " p=" << cls.p << " q=" << q
     << " beta=" << cls.beta;
  r.description = os.str();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 0) throw std::invalid_argument("sweep: n must be >= 0");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw std::invalid_argument("sweep: n list must be strictly increasing");
    }
  }
  if (n_list.empty()) return r;
  const int nmax = n_list.back();
  ProjectionOptions po = opts.projection;
  if (po.K <= 0) po.K = std::max(8, 4 * nmax);
  if (po.grid_N <= 0) po.grid_N = 4 * po.K;
  if (4 * nmax > po.K) {
    throw std::invalid_argument("sweep: max n exceeds K/4; the tail is not resolved");
  }
  if (2 * po.K >= po.grid_N) throw std::invalid_argument("sweep: grid too coarse for K");
  r.K = po.K;
  r.grid_N = po.grid_N;
  const std::function<WidthEstimate(int)> job = [&](int i) {
    return projection_upper_bound(cls, q, n_list[static_cast<std::size_t>(i)], po);
  };
  r.estimates = parallel_map<WidthEstimate>(static_cast<int>(n_list.size()), job);
  return r;
}

FitResult fit_values(const std::vector<double>& x, const std::vector<double>& v, FitModel model) {
  if (x.size() != v.size()) throw std::invalid_argument("fit: length mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit: at least 4 points are required");
  std::vector<double> ly(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw std::invalid_argument("fit: log fit needs positive finite values");
    }
    ly[i] = std::log(v[i]);
  }
  FitResult f;
  f.model = model;
  f.points = static_cast<int>(x.size());
  if (model == FitModel::PowerLaw) {
    std::vector<double> lx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);
    const Line l = regress(lx, ly);
    f.slope = l.slope;
    f.intercept = l.intercept;
    f.residual = l.rms;
    return f;
  }
  // Variable projection: for fixed gamma the model is linear in (c, mu).
  auto profile = [&](double lg) {
    const double g = std::exp(lg);
    std::vector<double> t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) t[i] = std::pow(x[i], g);
    return regress(t, ly);
  };
  const double lo = std::log(0.05);
  const double hi = std::log(4.0);
  const int grid = 240;
  int best = 0;
  double bestv = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double v0 = profile(lo + (hi - lo) * i / grid).rms;
    if (v0 < bestv) {
      bestv = v0;
      best = i;
    }
  }
  const double step = (hi - lo) / grid;
  const double a = std::max(lo, lo + step * (best - 1));
  const double b = std::min(hi, lo + step * (best + 1));
  const auto res = boost::math::tools::brent_find_minima(
      [&](double lg) { return profile(lg).rms; }, a, b, 52);
  double lg = res.first;
  if (profile(lg).rms > bestv) lg = lo + step * best;
  const Line l = profile(lg);
  f.gamma = std::exp(lg);
  f.mu = -l.slope;
  f.c = l.intercept;
  f.residual = l.rms;
  return f;
}

FitResult fit_order(const SweepResult& s, FitModel model, bool use_lower) {
  std::vector<double> x;
  std::vector<double> v;
  for (const WidthEstimate& e : s.estimates) {
    x.push_back(e.n + 1.0);
    v.push_back(use_lower ? e.lower : e.upper);
  }
  return fit_values(x, v, model);
}

VerdictReport verdict(const SweepResult& s, const RegimeVerdict& pred, const VerdictOptions& opts) {
  if (pred.label == RegimeLabel::Unclassified) {
    throw std::invalid_argument("verdict: regime is unclassified");
  }
  VerdictReport r;
  r.label = pred.label;
  const std::string name = to_string(pred.label);
  std::vector<double> x;
  std::vector<double> up;
  std::vector<double> lo;
  for (const WidthEstimate& e : s.estimates) {
    x.push_back(e.n + 1.0);
    up.push_back(e.upper);
    lo.push_back(e.lower);
  }
  switch (pred.shape) {
    case RegimeVerdict::Shape::LogPower: {
      if (s.estimates.empty()) throw std::invalid_argument("verdict: empty sweep");
      auto worst = [&](const std::vector<double>& v) {
        double w = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double phi = std::pow(std::log(s.estimates[i].n + 1.0), -pred.rho);
          w = std::max(w, std::abs(std::log(v[i] / phi)));
        }
        return w;
      };
      r.upper_statistic = worst(up);
      r.lower_statistic = worst(lo);
      r.bracket_lo = 0.0;
      r.bracket_hi = std::log(opts.C);
      r.pass = r.upper_statistic <= r.bracket_hi;
      r.lower_pass = r.lower_statistic <= r.bracket_hi;
      r.lines.push_back(name + ": max |log(upper/phi(n))| = " + fmt(r.upper_statistic) +
                        " vs log C = " + fmt(r.bracket_hi));
      r.lines.push_back(name + ": max |log(lower/phi(n))| = " + fmt(r.lower_statistic));
      break;
    }
    case RegimeVerdict::Shape::Power: {
      const FitResult fu = fit_values(x, up, FitModel::PowerLaw);
      const FitResult fl = fit_values(x, lo, FitModel::PowerLaw);
      r.upper_statistic = fu.slope;
      r.lower_statistic = fl.slope;
      r.bracket_lo = pred.lower_exponent - opts.tol;
      r.bracket_hi = pred.upper_exponent + opts.tol;
      r.pass = fu.slope >= r.bracket_lo && fu.slope <= r.bracket_hi;
      r.lower_pass = fl.slope >= r.bracket_lo && fl.slope <= r.bracket_hi;
      r.lower_informational = pred.label == RegimeLabel::Small;
      r.lines.push_back(name + ": upper-estimator slope " + fmt(fu.slope) + " in [" +
                        fmt(r.bracket_lo) + ", " + fmt(r.bracket_hi) + "]");
      r.lines.push_back(name + ": lower-estimator slope " + fmt(fl.slope) +
                        (r.lower_informational ? " (informational)" : ""));
      break;
    }
    case RegimeVerdict::Shape::StretchedExp: {
      if (pred.label == RegimeLabel::Infinite) {
        auto envelope_slope = [&](const std::vector<double>& v) {
          std::vector<double> lx(x.size());
          std::vector<double> y(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(v[i] > 0.0)) throw std::invalid_argument("verdict: non-positive estimate");
            lx[i] = std::log(x[i]);
            y[i] = std::log(v[i]) + pred.mu * std::pow(x[i], pred.gamma);
          }
          return regress(lx, y).slope;
        };
        if (x.size() < 2) throw std::invalid_argument("verdict: too few points");
        r.upper_statistic = envelope_slope(up);
        r.lower_statistic = envelope_slope(lo);
        r.bracket_lo = -opts.envelope_tol;
        r.bracket_hi = pred.upper_poly + opts.envelope_tol;
        r.pass = r.upper_statistic >= r.bracket_lo && r.upper_statistic <= r.bracket_hi;
        r.lower_pass = r.lower_statistic >= r.bracket_lo && r.lower_statistic <= r.bracket_hi;
        r.lines.push_back(name + ": envelope slope of upper " + fmt(r.upper_statistic) + " in [" +
                          fmt(r.bracket_lo) + ", " + fmt(r.bracket_hi) + "]");
        r.lines.push_back(name + ": envelope slope of lower " + fmt(r.lower_statistic));
      } else {
        const FitResult fu = fit_values(x, up, FitModel::StretchedExp);
        std::vector<double> lx(x.size());
        std::vector<double> res(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          lx[i] = std::log(x[i]);
          res[i] = std::log(up[i]) - (fu.c - fu.mu * std::pow(x[i], fu.gamma));
        }
        const double drift = regress(lx, res).slope;
        r.upper_statistic = fu.gamma;
        r.bracket_lo = pred.gamma * (1.0 - opts.gamma_tol);
        r.bracket_hi = pred.gamma * (1.0 + opts.gamma_tol);
        r.pass = fu.gamma >= r.bracket_lo && fu.gamma <= r.bracket_hi &&
                 std::abs(drift) <= opts.drift_tol;
        const FitResult fl = fit_values(x, lo, FitModel::StretchedExp);
        r.lower_statistic = fl.gamma;
        r.lower_pass = fl.gamma >= r.bracket_lo && fl.gamma <= r.bracket_hi;
        r.lines.push_back(name + ": fitted gamma " + fmt(fu.gamma) + " (mu " + fmt(fu.mu) +
                          ") in [" + fmt(r.bracket_lo) + ", " + fmt(r.bracket_hi) +
                          "], residual drift " + fmt(drift));
        r.lines.push_back(name + ": lower-estimator gamma " + fmt(fl.gamma));
      }
      break;
    }
  }
  r.lines.push_back(std::string("verdict: ") + (r.pass ? "PASS" : "FAIL"));
  return r;
}

}  // namespace nwidths
