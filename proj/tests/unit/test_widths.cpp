#include <cmath>

#include "doctest.h"

#include "nwidths/widths.hpp"

using namespace nwidths;

namespace {

SearchOptions quick(std::uint64_t seed = 1) {
  SearchOptions o;
  o.restarts = 6;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_SUITE("widths") {
TEST_CASE("svd oracle") {
  const DiagonalOperator u(Eigen::Vector3d(1.0, 0.5, 0.2), 2.0, 2.0);
  CHECK(svd_oracle(u, 0).upper == 1.0);
  CHECK(svd_oracle(u, 2).upper == doctest::Approx(0.2));
  CHECK(svd_oracle(u, 3).upper == 0.0);
  CHECK(svd_oracle(u, 1).certified);
  CHECK_THROWS(svd_oracle(DiagonalOperator(Eigen::Vector2d(1, 1), 1.5, 2.0), 1));
}

TEST_CASE("operator validation and adjoint") {
  CHECK_THROWS(DiagonalOperator(Eigen::Vector2d(1, 1), 1.0, 2.0));
  const DiagonalOperator u(Eigen::Vector2d(1, 0.5), 1.5, 3.0);
  const DiagonalOperator a = adjoint(u);
  CHECK(a.p == doctest::Approx(1.5));
  CHECK(a.q == doctest::Approx(3.0));
  CHECK(a.entries == u.entries);
  CHECK(u.body().p() == 1.5);
  CHECK(u.target().p() == 3.0);
}

TEST_CASE("Hilbert searches match singular values") {
  const DiagonalOperator u(Eigen::Vector4d(1.0, 0.5, 1.0 / 3.0, 0.25), 2.0, 2.0);
  for (int n = 0; n <= 3; ++n) {
    CAPTURE(n);
    const WidthTriple t = compute_widths(u.body(), u.target(), n, quick());
    const double s = 1.0 / (n + 1);
    CHECK(t.kolmogorov.estimate.upper == doctest::Approx(s).epsilon(1e-6));
    CHECK(t.gelfand.estimate.upper == doctest::Approx(s).epsilon(1e-6));
    CHECK(t.linear.estimate.upper == doctest::Approx(s).epsilon(1e-6));
    CHECK(t.kolmogorov.estimate.lower <= t.kolmogorov.estimate.upper * (1 + 1e-12));
  }
}

TEST_CASE("Kolmogorov widths of the l_1 ball in l_2") {
  // d_n(B_1^m, l_2^m) = sqrt(1 - n/m)
  const CompactBody A(1.0, Vec::Ones(4));
  const Norm X = Norm::lp(2, 4);
  for (int n = 1; n <= 2; ++n) {
    CAPTURE(n);
    const SubspaceResult r = kolmogorov_search(A, X, n, quick(3));
    CHECK(r.estimate.upper == doctest::Approx(std::sqrt(1.0 - n / 4.0)).epsilon(1e-5));
    CHECK(kolmogorov_value(A, X, r.basis) == doctest::Approx(r.estimate.upper).epsilon(1e-9));
  }
}

TEST_CASE("ordering and inner values on a generic operator") {
  const DiagonalOperator u(Eigen::Vector3d(1.0, 0.6, 0.3), 1.5, 3.0);
  const CompactBody A = u.body();
  const Norm X = u.target();
  const WidthTriple t = compute_widths(A, X, 1, quick(5));
  CHECK(t.kolmogorov.estimate.upper <= t.linear.estimate.upper * (1 + 1e-12));
  CHECK(t.gelfand.estimate.upper <= t.linear.estimate.upper * (1 + 1e-12));
  CHECK(t.linear.estimate.upper <= radius(A, X) * (1 + 1e-12));
  CHECK(linear_value(A, X, t.linear.U, t.linear.Phi) ==
        doctest::Approx(t.linear.estimate.upper).epsilon(1e-6));
  CHECK(gelfand_value(A, X, t.gelfand.basis) ==
        doctest::Approx(t.gelfand.estimate.upper).epsilon(1e-6));
  const WidthEstimate lb = certificate_lower_bound(A, X, 1);
  CHECK(lb.lower <= t.kolmogorov.estimate.upper * (1 + 1e-9));
  CHECK(lb.lower <= t.gelfand.estimate.upper * (1 + 1e-9));
  CHECK(cowidth(A, X, 1, quick(5)).upper == doctest::Approx(2 * t.gelfand.estimate.upper).epsilon(1e-4));
}

TEST_CASE("radius") {
  // sup over B(l_1) of the l_2 norm is the largest entry
  CHECK(radius(CompactBody(1.0, Eigen::Vector3d(2.0, 1.0, 0.5)), Norm::lp(2, 3)) == doctest::Approx(2.0));
  // identity l_2 -> l_inf
  CHECK(radius(CompactBody(2.0, Vec::Ones(3)), Norm::lp(kInf, 3)) == doctest::Approx(1.0));
}

TEST_CASE("duality gap is small on a non-Hilbert operator") {
  const DiagonalOperator u(Eigen::Vector3d(1.0, 0.7, 0.4), 1.5, 3.0);
  const DualityReport r = duality_check(u, 1, quick(9));
  CHECK(r.gelfand_gap <= 0.03);
  CHECK(r.linear_gap <= 0.03);
}

TEST_CASE("operator suite is seeded and cycles through exponents") {
  const auto a = operator_suite(4, 20);
  const auto b = operator_suite(4, 20);
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].op.entries == b[i].op.entries);
    CHECK(a[i].op.dim() == 4);
    CHECK(a[i].op.entries.maxCoeff() <= 1.0);
    CHECK(a[i].op.entries.minCoeff() >= 0.1);
    for (int k = 1; k < 4; ++k) CHECK(a[i].op.entries[k] <= a[i].op.entries[k - 1]);
  }
  CHECK(a[1].op.p == 2.0);
  CHECK(a[3].op.q == 2.0);
  CHECK(a[9].n == 2);
  CHECK(operator_suite(5, 20)[0].op.entries != a[0].op.entries);
  CHECK_THROWS(operator_suite(1, 3, 0));
}

TEST_CASE("projection bound: closed form in L_2 and monotone elsewhere") {
  const FunctionClass h(MultiplierSequence::sobolev(1.0), 2.0);
  ProjectionOptions o;
  o.K = 32;
  CHECK(projection_upper_bound(h, 2.0, 7, o).upper == doctest::Approx(1.0 / 8.0));
  const FunctionClass c(MultiplierSequence::sobolev(0.8), 1.5);
  const double u4 = projection_upper_bound(c, 2.0, 4, o).upper;
  const double u8 = projection_upper_bound(c, 2.0, 8, o).upper;
  CHECK(u8 < u4);
  CHECK(class_lower_bound(c, 2.0, 4) <= u4);
  CHECK_THROWS(projection_upper_bound(c, 2.0, 40, o));
}

TEST_CASE("enforce_monotone takes a running minimum") {
  std::vector<WidthEstimate> v(3);
  v[0].upper = 1.0;
  v[1].upper = 1.2;
  v[1].lower = 1.1;
  v[2].upper = 0.5;
  enforce_monotone(v);
  CHECK(v[1].upper == 1.0);
  CHECK(v[1].raw_upper == 1.2);
  CHECK(v[1].monotone_violation);
  CHECK_FALSE(v[2].monotone_violation);
}
}
