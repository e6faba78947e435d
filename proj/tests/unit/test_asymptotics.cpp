#include <cmath>

#include "doctest.h"

#include "nwidths/asymptotics.hpp"

using namespace nwidths;

TEST_SUITE("asymptotics") {
TEST_CASE("power-law fit recovers the slope") {
  std::vector<double> x;
  std::vector<double> v;
  for (double t : {9.0, 17.0, 33.0, 65.0}) {
    x.push_back(t);
    v.push_back(3.0 * std::pow(t, -1.25));
  }
  const FitResult f = fit_values(x, v, FitModel::PowerLaw);
  CHECK(f.slope == doctest::Approx(-1.25));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.residual <= 1e-12);
  CHECK(f.points == 4);
  CHECK(fit_values(x, {1, 1, 1, 1}, FitModel::PowerLaw).slope == doctest::Approx(0.0));
}

TEST_CASE("stretched-exponential fit recovers gamma and mu") {
  for (double g : {0.5, 1.0, 1.5}) {
    std::vector<double> x;
    std::vector<double> v;
    for (double t : {5.0, 9.0, 17.0, 33.0}) {
      x.push_back(t);
      v.push_back(2.0 * std::exp(-0.7 * std::pow(t, g)));
    }
    const FitResult f = fit_values(x, v, FitModel::StretchedExp);
    CAPTURE(g);
    CHECK(f.gamma == doctest::Approx(g).epsilon(1e-4));
    CHECK(f.mu == doctest::Approx(0.7).epsilon(1e-3));
  }
}

TEST_CASE("fit input validation") {
  CHECK_THROWS(fit_values({1, 2, 3}, {1, 1, 1}, FitModel::PowerLaw));
  CHECK_THROWS(fit_values({1, 2, 3, 4}, {1, 0, 1, 1}, FitModel::PowerLaw));
}

TEST_CASE("sweep grid checks") {
  const FunctionClass c(MultiplierSequence::sobolev(1.0), 2.0);
  CHECK_THROWS(sweep(c, 2.0, {8, 4}));
  CHECK_THROWS(sweep(c, 2.0, {-1, 4}));
  SweepOptions o;
  o.projection.K = 8;
  CHECK_THROWS(sweep(c, 2.0, {4, 8}, o));
  const SweepResult s = sweep(c, 2.0, {2, 4, 8, 16});
  CHECK(s.K == 64);
  CHECK(s.grid_N == 256);
  CHECK(s.estimates[1].upper == doctest::Approx(0.2));
}

TEST_CASE("verdicts") {
  const MultiplierSequence seq = MultiplierSequence::sobolev(0.8);
  SweepResult s = sweep(FunctionClass(seq, 1.5), 2.0, {8, 16, 32, 64});
  s.fit = fit_order(s, FitModel::PowerLaw);
  s.has_fit = true;
  const RegimeVerdict pred = predicted_orders(RegimeLabel::Finite, 1.5, 2.0, seq);
  const VerdictReport v = verdict(s, pred);
  CHECK(v.pass);
  CHECK(v.upper_statistic >= v.bracket_lo);
  CHECK(v.upper_statistic <= v.bracket_hi);
  CHECK_FALSE(v.lines.empty());

  // a wrong bracket must fail
  RegimeVerdict wrong = pred;
  wrong.lower_exponent = -3.0;
  wrong.upper_exponent = -2.5;
  CHECK_FALSE(verdict(s, wrong).pass);
}
}
