#include <cmath>

#include "doctest.h"

#include "nwidths/norms.hpp"

using namespace nwidths;

TEST_SUITE("norms") {
TEST_CASE("conjugate exponents") {
  CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
  CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0));
  CHECK(conjugate_exponent(3.0) == doctest::Approx(1.5));
  CHECK(conjugate_exponent(1.0) == kInf);
  CHECK(conjugate_exponent(kInf) == 1.0);
}

TEST_CASE("abs_pow fast paths agree with pow") {
  for (double e : {1.0, 2.0, 3.0, 0.5, 1.5, -0.5, 1.0 / 3.0, 2.0 / 3.0, 0.0, 0.7}) {
    CHECK(abs_pow(2.7, e) == doctest::Approx(std::pow(2.7, e)).epsilon(1e-14));
  }
}

TEST_CASE("l_p values") {
  const Vec x = Eigen::Vector3d(3, -4, 0);
  CHECK(Norm::lp(2, 3)(x) == doctest::Approx(5.0));
  CHECK(Norm::lp(1, 3)(x) == doctest::Approx(7.0));
  CHECK(Norm::lp(kInf, 3)(x) == doctest::Approx(4.0));
  CHECK(Norm::lp(3, 3)(x) == doctest::Approx(std::cbrt(91.0)));
  CHECK(Norm::scaled_lp(2, Eigen::Vector3d(2, 1, 1))(x) == doctest::Approx(std::sqrt(52.0)));
  CHECK(Norm::weighted_lp(2, Eigen::Vector3d(4, 1, 1))(x) == doctest::Approx(std::sqrt(52.0)));
}

TEST_CASE("dual norm and norming functionals satisfy Hoelder with equality") {
  const Vec x = Eigen::Vector4d(0.3, -1.2, 0.7, 0.05);
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    const Norm n = Norm::scaled_lp(p, Eigen::Vector4d(1.0, 0.5, 2.0, 1.5));
    const Vec phi = n.norming_functional(x);
    CHECK(n.dual_value(phi) == doctest::Approx(1.0));
    CHECK(x.dot(phi) == doctest::Approx(n(x)));
    const Vec y = n.dual_norming_vector(x);
    CHECK(n(y) == doctest::Approx(1.0));
    CHECK(x.dot(y) == doctest::Approx(n.dual_value(x)));
  }
}

TEST_CASE("polytope norm from the cube facets is l_inf") {
  Mat F(6, 3);
  F << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  const Norm n = Norm::polytope(F);
  const Vec x = Eigen::Vector3d(0.2, -0.9, 0.5);
  CHECK(n(x) == doctest::Approx(0.9));
  // the dual of l_inf is l_1
  CHECK(n.dual_value(x) == doctest::Approx(1.6));
  const Vec phi = n.norming_functional(x);
  CHECK(x.dot(phi) == doctest::Approx(0.9));
  CHECK(n.polyhedral());
  CHECK_FALSE(n.smooth());
}

TEST_CASE("l_1 facets enumerate sign vectors") {
  const Mat F = Norm::lp(1, 3).polytope_facets();
  CHECK(F.rows() == 8);
  CHECK(F.cwiseAbs().minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("euclidean lower constant bounds the norm on the sphere") {
  const Norm n = Norm::lp(3, 4);
  const double c = n.euclidean_lower_constant();
  for (int i = 0; i < 20; ++i) {
    Vec x = Vec::Random(4);
    x.normalize();
    CHECK(n(x) >= c - 1e-12);
  }
  CHECK(Norm::lp(2, 4).box_radius() == doctest::Approx(1.0));
}

TEST_CASE("invalid input") {
  CHECK_THROWS(Norm::lp(0.5, 3));
  CHECK_THROWS(Norm::scaled_lp(2, Eigen::Vector2d(1, -1)));
}
}
