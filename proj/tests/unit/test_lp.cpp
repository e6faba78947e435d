#include "doctest.h"

#include "nwidths/lp.hpp"

using namespace nwidths;

TEST_SUITE("lp") {
TEST_CASE("simplex solves a small standard-form program") {
  // min -x1 - 2 x2 s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6
  Eigen::VectorXd c(4);
  c << -1, -2, 0, 0;
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 1, 3, 0, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  const lp::Solution s = lp::solve_standard_form(c, A, b);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(-5.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  // strong duality
  CHECK(b.dot(s.dual) == doctest::Approx(s.objective));
  CHECK(((c - A.transpose() * s.dual).array() >= -1e-9).all());
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  Eigen::VectorXd b(1);
  b << -1;
  CHECK(lp::solve_standard_form(Eigen::Vector2d(1, 1), A, b).status == lp::Status::Infeasible);
  Eigen::MatrixXd A2(1, 2);
  A2 << 1, -1;
  Eigen::VectorXd b2(1);
  b2 << 0;
  CHECK(lp::solve_standard_form(Eigen::Vector2d(-1, 0), A2, b2).status == lp::Status::Unbounded);
}

TEST_CASE("redundant equality rows") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 1, 2, 2;
  Eigen::VectorXd b(2);
  b << 1, 2;
  const lp::Solution s = lp::solve_standard_form(Eigen::Vector2d(1, 2), A, b);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("nnls clips negative least-squares components") {
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd f(3);
  f << 1, -2, 3;
  const Eigen::VectorXd u = lp::nnls(E, f);
  CHECK(u[0] == doctest::Approx(1.0));
  CHECK(u[1] == doctest::Approx(0.0));
  CHECK(u[2] == doctest::Approx(3.0));
}

TEST_CASE("least distance to a half-plane") {
  Eigen::MatrixXd G(1, 2);
  G << 1, 1;
  Eigen::VectorXd h(1);
  h << 2;
  Eigen::VectorXd x;
  REQUIRE(lp::least_distance(G, h, x));
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  Eigen::MatrixXd G2(2, 1);
  G2 << 1, -1;
  Eigen::VectorXd h2(2);
  h2 << 1, 1;
  CHECK_FALSE(lp::least_distance(G2, h2, x));
}
}
