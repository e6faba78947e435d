#include <cmath>

#include "doctest.h"

#include "nwidths/optimize.hpp"

using namespace nwidths;

TEST_SUITE("optimize") {
TEST_CASE("Nelder-Mead finds the Rosenbrock minimum") {
  auto rosen = [](const Vec& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_evals = 5000;
  const NelderMeadResult r = nelder_mead(rosen, Eigen::Vector2d(-1.2, 1.0), o);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Nelder-Mead respects the evaluation budget") {
  NelderMeadOptions o;
  o.max_evals = 50;
  const NelderMeadResult r = nelder_mead([](const Vec& x) { return x.squaredNorm(); },
                                         Vec::Ones(6), o);
  CHECK(r.evals <= 50 + 7);
}

TEST_CASE("parallel_map keeps index order for any worker count") {
  for (int w : {1, 3, 8}) {
    set_worker_count(w);
    const auto v = parallel_map<int>(25, [](int i) { return i * i; });
    REQUIRE(v.size() == 25);
    for (int i = 0; i < 25; ++i) CHECK(v[static_cast<std::size_t>(i)] == i * i);
  }
  set_worker_count(1);
  CHECK(worker_count() == 1);
}

TEST_CASE("parallel_map propagates exceptions") {
  set_worker_count(2);
  CHECK_THROWS(parallel_map<int>(4, [](int i) -> int {
    if (i == 3) throw std::runtime_error("boom");
    return i;
  }));
  set_worker_count(1);
}

TEST_CASE("seed mixing is deterministic and spreads") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
}
