#include "nwidths/classes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nwidths {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Sobolev: return "sobolev";
    case Regime::SuperSmall: return "super-small";
    case Regime::ExponentialInfinite: return "exponential-infinite";
    case Regime::ExponentialSuperHigh: return "exponential-super-high";
    case Regime::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::SuperSmall: return "SuperSmall";
    case RegimeLabel::Small: return "Small";
    case RegimeLabel::Finite: return "Finite";
    case RegimeLabel::Infinite: return "Infinite";
    case RegimeLabel::SuperHigh: return "SuperHigh";
    case RegimeLabel::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

MultiplierSequence MultiplierSequence::sobolev(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("sobolev: r must be >= 0");
  MultiplierSequence s;
  s.regime = Regime::Sobolev;
  s.r = r;
  return s;
}

MultiplierSequence MultiplierSequence::super_small(double rho, double p, double q) {
  if (!(rho > 0.0)) throw std::invalid_argument("super_small: rho must be > 0");
  MultiplierSequence s;
  s.regime = Regime::SuperSmall;
  s.rho = rho;
  s.base_exponent = std::max(0.0, 1.0 / p - 1.0 / q);
  return s;
}

MultiplierSequence MultiplierSequence::exponential(double mu, double gamma) {
  if (!(mu > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("exponential: mu and gamma must be > 0");
  }
  MultiplierSequence s;
  s.regime = gamma < 1.0 ? Regime::ExponentialInfinite : Regime::ExponentialSuperHigh;
  s.mu = mu;
  s.gamma = gamma;
  return s;
}

MultiplierSequence MultiplierSequence::from_table(std::vector<double> table) {
  for (double v : table) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("custom multiplier: entries must be finite and >= 0");
    }
  }
  MultiplierSequence s;
  s.regime = Regime::Custom;
  s.custom = std::move(table);
  return s;
}

double MultiplierSequence::at(int k) const {
  if (k < 1) throw std::invalid_argument("lambda_at: k must be >= 1");
  const double dk = static_cast<double>(k);
  switch (regime) {
    case Regime::Sobolev: return std::pow(dk, -r);
    case Regime::SuperSmall:
      return std::pow(std::log(dk + 1.0), -rho) * std::pow(dk, -base_exponent);
    case Regime::ExponentialInfinite:
    case Regime::ExponentialSuperHigh: return std::exp(-mu * std::pow(dk, gamma));
    case Regime::Custom:
      return static_cast<std::size_t>(k) <= custom.size() ? custom[k - 1] : 0.0;
  }
  return 0.0;
}

std::string MultiplierSequence::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (regime) {
    case Regime::Sobolev: os << "k^(-" << r << ")"; break;
    case Regime::SuperSmall:
      os << "ln(k+1)^(-" << rho << ") k^(-" << base_exponent << ")";
      break;
    case Regime::ExponentialInfinite:
    case Regime::ExponentialSuperHigh: os << "exp(-" << mu << " k^" << gamma << ")"; break;
    case Regime::Custom: os << "table[" << custom.size() << "]"; break;
  }
  return os.str();
}

double lambda_at(const MultiplierSequence& seq, int k) { return seq.at(k); }

FunctionClass::FunctionClass(MultiplierSequence m, double p_, double beta_)
    : multiplier(std::move(m)), p(p_), beta(beta_) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("function class: p must be in (1, inf)");
  }
}

double sobolev_threshold(double p, double q) { return 1.0 / p - 1.0 / q; }

double small_smoothness_threshold(double p, double q) {
  return 0.5 * (1.0 / p - 1.0 / q) / (1.0 / p - 0.5);
}

namespace {

bool finite_open(double p) { return p > 1.0 && std::isfinite(p); }
bool low_range(double p, double q) { return p > 1.0 && p < q && q <= 2.0; }

}  // namespace

RegimeLabel regime_classify(const MultiplierSequence& seq, double p, double q) {
  switch (seq.regime) {
    case Regime::SuperSmall:
      return low_range(p, q) ? RegimeLabel::SuperSmall : RegimeLabel::Unclassified;
    case Regime::Sobolev: {
      if (!low_range(p, q)) return RegimeLabel::Unclassified;
      const double t1 = sobolev_threshold(p, q);
      const double t2 = small_smoothness_threshold(p, q);
      if (seq.r > t1 && seq.r < t2) return RegimeLabel::Small;
      if (seq.r > t2) return RegimeLabel::Finite;
      return RegimeLabel::Unclassified;
    }
    case Regime::ExponentialInfinite:
    case Regime::ExponentialSuperHigh:
      if (seq.gamma >= 1.0) {
        return finite_open(p) && finite_open(q) ? RegimeLabel::SuperHigh
                                                : RegimeLabel::Unclassified;
      }
      return low_range(p, q) ? RegimeLabel::Infinite : RegimeLabel::Unclassified;
    case Regime::Custom: return RegimeLabel::Unclassified;
  }
  return RegimeLabel::Unclassified;
}

RegimeVerdict predicted_orders(RegimeLabel label, double p, double q,
                               const MultiplierSequence& params) {
  RegimeVerdict v;
  v.label = label;
  const double t1 = sobolev_threshold(p, q);
  switch (label) {
    case RegimeLabel::SuperSmall:
      v.shape = RegimeVerdict::Shape::LogPower;
      v.rho = params.rho;
      v.conditions = {{"1<p<q<=2", low_range(p, q)}, {"rho>0", params.rho > 0.0}};
      break;
    case RegimeLabel::Small:
      v.shape = RegimeVerdict::Shape::Power;
      v.lower_exponent = p * (-params.r + t1) / (2.0 * (p - 1.0));
      v.upper_exponent = -params.r + t1;
      v.conditions = {{"1<p<q<=2", low_range(p, q)},
                      {"r>1/p-1/q", params.r > t1},
                      {"r<threshold", params.r < small_smoothness_threshold(p, q)}};
      break;
    case RegimeLabel::Finite:
      v.shape = RegimeVerdict::Shape::Power;
      v.lower_exponent = -params.r;
      v.upper_exponent = -params.r + t1;
      v.conditions = {{"1<p<q<=2", low_range(p, q)},
                      {"r>threshold", params.r > small_smoothness_threshold(p, q)}};
      break;
    case RegimeLabel::Infinite:
      v.shape = RegimeVerdict::Shape::StretchedExp;
      v.mu = params.mu;
      v.gamma = params.gamma;
      v.upper_poly = (1.0 - params.gamma) * t1;
      v.conditions = {{"1<p<q<=2", low_range(p, q)},
                      {"0<gamma<1", params.gamma > 0.0 && params.gamma < 1.0}};
      break;
    case RegimeLabel::SuperHigh:
      v.shape = RegimeVerdict::Shape::StretchedExp;
      v.mu = params.mu;
      v.gamma = params.gamma;
      v.conditions = {{"1<p,q<inf", finite_open(p) && finite_open(q)},
                      {"gamma>=1", params.gamma >= 1.0}};
      break;
    case RegimeLabel::Unclassified:
      throw std::invalid_argument("predicted_orders: regime is unclassified");
  }
  return v;
}

}  // namespace nwidths
