#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nwidths {

enum class Regime { Sobolev, SuperSmall, ExponentialInfinite, ExponentialSuperHigh, Custom };

std::string to_string(Regime r);

/// The multiplier lambda(k), k >= 1.
struct MultiplierSequence {
  Regime regime = Regime::Sobolev;
  double r = 1.0;              // Sobolev exponent
  double rho = 1.0;            // log exponent
  double mu = 1.0;             // exponential rate
  double gamma = 1.0;          // exponential power
  double base_exponent = 0.0;  // (1/p - 1/q)_+ for SuperSmall
  std::vector<double> custom;  // lambda(1..K) for Custom

  static MultiplierSequence sobolev(double r);
  /// (ln(k+1))^{-rho} k^{-(1/p-1/q)_+}.
  static MultiplierSequence super_small(double rho, double p, double q);
  /// exp(-mu k^gamma); tagged Infinite for gamma < 1, SuperHigh otherwise.
  static MultiplierSequence exponential(double mu, double gamma);
  static MultiplierSequence from_table(std::vector<double> table);

  double operator()(int k) const { return at(k); }
  double at(int k) const;
  std::string describe() const;
};

double lambda_at(const MultiplierSequence& seq, int k);

/// Lambda_beta U_p.
struct FunctionClass {
  MultiplierSequence multiplier;
  double p = 2.0;
  double beta = 0.0;

  FunctionClass() = default;
  FunctionClass(MultiplierSequence m, double p, double beta = 0.0);
};

enum class RegimeLabel { SuperSmall, Small, Finite, Infinite, SuperHigh, Unclassified };

std::string to_string(RegimeLabel r);

RegimeLabel regime_classify(const MultiplierSequence& seq, double p, double q);

/// Two-sided asymptotic bracket. For power laws both sides are exponents of
/// n; for the exponential regimes the envelope exp(-mu n^gamma) carries an
/// extra factor n^{upper_poly} on the upper side.
struct RegimeVerdict {
  RegimeLabel label = RegimeLabel::Unclassified;
  enum class Shape { LogPower, Power, StretchedExp } shape = Shape::Power;
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  double upper_poly = 0.0;
  std::vector<std::pair<std::string, bool>> conditions;
};

RegimeVerdict predicted_orders(RegimeLabel label, double p, double q,
                               const MultiplierSequence& params);

/// 1/p - 1/q.
double sobolev_threshold(double p, double q);
/// (1/2)(1/p - 1/q)/(1/p - 1/2).
double small_smoothness_threshold(double p, double q);

}  // namespace nwidths
