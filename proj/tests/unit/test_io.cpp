#include <cmath>
#include <cstdlib>
#include <string>

#include "doctest.h"

#include "nwidths/io.hpp"

using namespace nwidths;

TEST_SUITE("io") {
TEST_CASE("doubles round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 - std::sqrt(2.0), 1e-300, -7.25}) {
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_double(kInf) == "inf");
  CHECK(io::format_double(-kInf) == "-inf");
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("csv layout") {
  WidthEstimate e;
  e.n = 2;
  e.lower = 0.25;
  e.upper = 1.0 / 3.0;
  e.method = {"a", "b"};
  e.certified = true;
  const std::string csv = io::widths_csv({{"gelfand", e}});
  CHECK(csv.rfind("# schema_version=1\nwidth,n,lower,upper,method,certified,budget_exhausted\n", 0) == 0);
  CHECK(csv.find("gelfand,2,0.25,0.33333333333333331,") != std::string::npos);
}

TEST_CASE("width estimates round-trip through json, including inf") {
  WidthEstimate e;
  e.n = 3;
  e.lower = 0.5;
  e.upper = kInf;
  e.raw_upper = kInf;
  e.method = {"nelder-mead"};
  e.budget_exhausted = true;
  const WidthEstimate back = io::width_estimate_from_json(io::json::parse(io::to_json(e).dump()));
  CHECK(back.n == 3);
  CHECK(back.lower == 0.5);
  CHECK(back.upper == kInf);
  CHECK(back.method == e.method);
  CHECK(back.budget_exhausted);
  CHECK_FALSE(back.certified);
}

TEST_CASE("norms round-trip through json") {
  const Norm a = Norm::scaled_lp(3.0, Eigen::Vector2d(1.0, 0.5));
  const Norm b = io::norm_from_json(io::to_json(a));
  const Vec x = Eigen::Vector2d(0.3, -2.0);
  CHECK(b(x) == doctest::Approx(a(x)));
  Mat F(4, 2);
  F << 1, 0, -1, 0, 0, 1, 0, -1;
  const Norm c = io::norm_from_json(io::to_json(Norm::polytope(F)));
  CHECK(c(x) == doctest::Approx(2.0));
  CHECK_THROWS(io::norm_from_json(io::json{{"kind", "weird"}}));
}

TEST_CASE("extension replay recomputes the recorded value") {
  const DiagonalOperator u(Eigen::Vector3d(1.0, 0.6, 0.3), 1.5, 3.0);
  ChainOptions co;
  co.search.restarts = 3;
  co.sample_size = 100;
  const ChainReport r = preabsolute_chain(u.body(), u.target(), 1, co);
  const io::json j = io::json::parse(io::extension_replay(u.body(), r).dump());
  const io::ReplayCheck c = io::replay_extension(j);
  CHECK(c.recomputed == doctest::Approx(c.recorded).epsilon(1e-12));
  io::json bad = j;
  bad["schema_version"] = 99;
  CHECK_THROWS(io::replay_extension(bad));
}
}
