#include <cmath>

#include "doctest.h"

#include "nwidths/extension.hpp"

using namespace nwidths;

namespace {

Mat prism_facets() {
  Mat F(8, 3);
  F << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 1, -1, 0, -1, 1, 0;
  return F;
}

}  // namespace

TEST_SUITE("extension") {
TEST_CASE("linearity filter") {
  const Mat S = Mat::Random(30, 3);
  const Vec v = Eigen::Vector3d(0.5, -1.0, 2.0);
  const CoefficientFunction lin = linearity_filter(S * v, S);
  CHECK(lin.linear);
  CHECK((lin.linear_part - v).norm() <= 1e-9);
  Vec t = S * v;
  t[3] += 0.1;
  CHECK_FALSE(linearity_filter(t, S).linear);
}

TEST_CASE("the extension norm restricts to the base norm") {
  const Norm X = Norm::polytope(prism_facets());
  DualSampleOptions o;
  o.size = 50;
  const Mat S = dual_ball_sample(X, o);
  const ExtensionSpace E = build_extension(X, S, {});
  for (int i = 0; i < 10; ++i) {
    const Vec x = Vec::Random(3);
    CHECK(E.norm(x) == doctest::Approx(X(x)));
  }
}

TEST_CASE("best approximation coefficients") {
  const CompactBody A(2.0, Eigen::Vector3d(1.0, 0.5, 0.25));
  const Mat basis = Eigen::Vector3d(1.0, 0.0, 0.0);
  const Vec c = best_approx_coeffs(Eigen::Vector3d(2.0, 1.0, 0.0), basis, A);
  CHECK(c[0] == doctest::Approx(2.0));
  const Mat T = coefficient_tables(A, basis, Mat::Identity(3, 3));
  CHECK(T(0, 0) == doctest::Approx(1.0));
  CHECK(T(1, 0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Hilbert chain is flat") {
  const DiagonalOperator u(Eigen::Vector3d(1.0, 0.6, 0.3), 2.0, 2.0);
  ChainOptions co;
  co.search.restarts = 4;
  co.sample_size = 200;
  const ChainReport r = preabsolute_chain(u.body(), u.target(), 1, co);
  REQUIRE(r.chain.size() == 2);
  CHECK(r.chain[0].upper == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(r.chain[1].upper == doctest::Approx(0.6).epsilon(1e-4));
  CHECK(r.extension_value <= r.widths.gelfand.estimate.upper * (1 + co.eps) + r.slack + 1e-12);
}

TEST_CASE("rank-one certificate on the hexagonal prism") {
  const CompactBody A(1.0, Vec::Ones(3));
  const Norm X = Norm::polytope(prism_facets());
  const RankOneCertificate c = certify_rank_one_gap(A, X);
  CHECK(c.gelfand == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.lower == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-4));
  CHECK(c.lower <= 2.0 - std::sqrt(2.0) + 1e-12);
  CHECK(c.margin > 0.085);
  CHECK(c.upper >= c.lower);
}

TEST_CASE("strict decrease in the extension on the prism") {
  const CompactBody A(1.0, Vec::Ones(3));
  const Norm X = Norm::polytope(prism_facets());
  ChainOptions co;
  co.search.restarts = 8;
  const ChainReport r = preabsolute_chain(A, X, 1, co);
  CHECK(r.chain[0].upper == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-4));
  CHECK(r.chain[1].upper == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.nonlinear >= 1);
}
}
