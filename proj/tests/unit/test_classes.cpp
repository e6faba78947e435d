#include <cmath>

#include "doctest.h"

#include "nwidths/classes.hpp"

using namespace nwidths;

TEST_SUITE("classes") {
TEST_CASE("multiplier values") {
  CHECK(MultiplierSequence::sobolev(1.0).at(4) == doctest::Approx(0.25));
  CHECK(MultiplierSequence::sobolev(0.0).at(9) == doctest::Approx(1.0));
  CHECK(MultiplierSequence::super_small(1.0, 2.0, 2.0).at(1) == doctest::Approx(1.0 / std::log(2.0)));
  const MultiplierSequence ss = MultiplierSequence::super_small(2.0, 1.5, 2.0);
  CHECK(ss.base_exponent == doctest::Approx(1.0 / 6.0));
  CHECK(ss.at(3) == doctest::Approx(std::pow(std::log(4.0), -2.0) * std::pow(3.0, -1.0 / 6.0)));
  CHECK(MultiplierSequence::exponential(0.5, 2.0).at(2) == doctest::Approx(std::exp(-2.0)));
  CHECK(MultiplierSequence::exponential(1.0, 0.5).regime == Regime::ExponentialInfinite);
  CHECK(MultiplierSequence::exponential(1.0, 1.0).regime == Regime::ExponentialSuperHigh);
  const MultiplierSequence t = MultiplierSequence::from_table({1.0, 0.5});
  CHECK(t.at(2) == 0.5);
  CHECK(t.at(3) == 0.0);
  CHECK(lambda_at(t, 1) == 1.0);
  CHECK_THROWS(t.at(0));
  CHECK_THROWS(MultiplierSequence::sobolev(-1.0));
  CHECK_THROWS(MultiplierSequence::exponential(0.0, 1.0));
  CHECK_THROWS(FunctionClass(t, 1.0));
}

TEST_CASE("log factor varies slowly") {
  const MultiplierSequence phi = MultiplierSequence::super_small(1.5, 2.0, 2.0);
  for (int k = 3; k <= 30; ++k) {
    for (int s : {2, 3}) {
      const double ratio = phi.at(static_cast<int>(std::pow(k, s))) / phi.at(k);
      CHECK(ratio >= 1.0 / (2.0 * std::pow(s, 1.5)));
      CHECK(ratio <= 2.0);
    }
  }
}

TEST_CASE("thresholds") {
  CHECK(sobolev_threshold(1.5, 2.0) == doctest::Approx(1.0 / 6.0));
  CHECK(small_smoothness_threshold(1.5, 2.0) == doctest::Approx(0.5));
  CHECK(small_smoothness_threshold(1.2, 1.5) == doctest::Approx(0.5 * (1 / 1.2 - 1 / 1.5) / (1 / 1.2 - 0.5)));
}

TEST_CASE("classification") {
  using L = RegimeLabel;
  CHECK(regime_classify(MultiplierSequence::sobolev(0.4), 1.5, 2.0) == L::Small);
  CHECK(regime_classify(MultiplierSequence::sobolev(0.8), 1.5, 2.0) == L::Finite);
  CHECK(regime_classify(MultiplierSequence::sobolev(0.1), 1.5, 2.0) == L::Unclassified);
  CHECK(regime_classify(MultiplierSequence::sobolev(0.8), 2.0, 3.0) == L::Unclassified);
  CHECK(regime_classify(MultiplierSequence::super_small(1, 1.5, 2), 1.5, 2.0) == L::SuperSmall);
  CHECK(regime_classify(MultiplierSequence::super_small(1, 2, 2), 2.0, 2.0) == L::Unclassified);
  CHECK(regime_classify(MultiplierSequence::exponential(1, 0.5), 1.5, 2.0) == L::Infinite);
  CHECK(regime_classify(MultiplierSequence::exponential(1, 1.5), 3.0, 2.0) == L::SuperHigh);
  CHECK(regime_classify(MultiplierSequence::from_table({1.0}), 1.5, 2.0) == L::Unclassified);
}

TEST_CASE("predicted exponents") {
  const RegimeVerdict s = predicted_orders(RegimeLabel::Small, 1.5, 2.0, MultiplierSequence::sobolev(0.4));
  CHECK(s.shape == RegimeVerdict::Shape::Power);
  // p/(2(p-1)) = 1.5 times (-r + 1/p - 1/q)
  CHECK(s.lower_exponent == doctest::Approx(-0.35));
  CHECK(s.upper_exponent == doctest::Approx(-0.4 + 1.0 / 6.0));
  const RegimeVerdict f = predicted_orders(RegimeLabel::Finite, 1.5, 2.0, MultiplierSequence::sobolev(0.8));
  CHECK(f.lower_exponent == doctest::Approx(-0.8));
  CHECK(f.upper_exponent == doctest::Approx(-0.8 + 1.0 / 6.0));
  const RegimeVerdict i =
      predicted_orders(RegimeLabel::Infinite, 1.5, 2.0, MultiplierSequence::exponential(0.5, 0.5));
  CHECK(i.shape == RegimeVerdict::Shape::StretchedExp);
  CHECK(i.upper_poly == doctest::Approx(0.5 / 6.0));
  for (const auto& [name, ok] : i.conditions) {
    CAPTURE(name);
    CHECK(ok);
  }
  CHECK_THROWS(predicted_orders(RegimeLabel::Unclassified, 2, 2, MultiplierSequence::sobolev(1)));
}
}
