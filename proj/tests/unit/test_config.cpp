#include "doctest.h"

#include "config.hpp"

using nwidths::cli::Config;
using nwidths::cli::ConfigError;
using nwidths::cli::MissingKey;

TEST_SUITE("config") {
TEST_CASE("key=value parsing with comments and overrides") {
  Config c = Config::parse("# scenario\np = 1.5\nq=2 # target\n\nn = 8, 16,32\nflag = yes\n", "t");
  CHECK(c.number("p") == 1.5);
  CHECK(c.number("q") == 2.0);
  CHECK(c.integers("n") == std::vector<long>{8, 16, 32});
  CHECK(c.flag("flag", false));
  CHECK(c.number("missing", 4.0) == 4.0);
  c.set("p=3");
  CHECK(c.number("p") == 3.0);
  CHECK(c.has("q"));
  CHECK(c.text("q") == "2");
}

TEST_CASE("errors") {
  const Config c = Config::parse("p = abc\nn = 1.5\nb = maybe\n", "t");
  CHECK_THROWS_AS(c.number("p"), ConfigError);
  CHECK_THROWS_AS(c.integer("n"), ConfigError);
  CHECK_THROWS_AS(c.flag("b", false), ConfigError);
  CHECK_THROWS_AS(c.text("nope"), MissingKey);
  CHECK_THROWS_AS(Config::parse("no equals sign\n", "t"), ConfigError);
  CHECK_THROWS_AS(Config::parse("= 3\n", "t"), ConfigError);
  CHECK_THROWS_AS(c.check_known({"p", "n"}), ConfigError);
  Config d;
  CHECK_THROWS_AS(d.set("novalue"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
}
}
