#include <doctest.h>

#include <cmath>

#include "incomedist/errors.hpp"
#include "incomedist/keyvalue.hpp"

using namespace incomedist;

TEST_CASE("parse key value text") {
  const auto cfg = KeyValueConfig::parse("# comment\nT = 37000\n\nname=eu2007  \nm1 = inf\nn = +12\n");
  CHECK(cfg.get_double("T") == 37000.0);
  CHECK(cfg.get_string("name", "") == "eu2007");
  CHECK(std::isinf(cfg.get_double("m1")));
  CHECK(cfg.get_int("n") == 12);
  CHECK(cfg.get_double("missing", 2.5) == 2.5);
  CHECK_FALSE(cfg.has("missing"));
}

TEST_CASE("parse errors carry line numbers") {
  try {
    KeyValueConfig::parse("a = 1\nnot a pair\n", "cfg.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  const auto cfg = KeyValueConfig::parse("x = 1.5abc\n");
  CHECK_THROWS_AS(cfg.get_double("x"), ParseError);
  CHECK_THROWS_AS(cfg.get_int("x"), ParseError);
  CHECK_THROWS_AS(cfg.get_double("absent"), ParseError);
}

TEST_CASE("round trip through text") {
  KeyValueConfig cfg;
  cfg.set("alpha", 2.8643);
  cfg.set("third", 1.0 / 3.0);
  cfg.set("m1", std::numeric_limits<double>::infinity());
  const auto back = KeyValueConfig::parse(cfg.to_text());
  CHECK(back.get_double("alpha") == 2.8643);
  CHECK(back.get_double("third") == 1.0 / 3.0);
  CHECK(std::isinf(back.get_double("m1")));
}

TEST_CASE("merge_from overrides") {
  auto a = KeyValueConfig::parse("x = 1\ny = 2\n");
  a.merge_from(KeyValueConfig::parse("y = 3\nz = 4\n"));
  CHECK(a.get_int("x") == 1);
  CHECK(a.get_int("y") == 3);
  CHECK(a.get_int("z") == 4);
}

TEST_CASE("number formatting") {
  CHECK(format_number(37000.0) == "37000");
  CHECK(parse_double(format_exact(0.1 + 0.2), "v") == 0.1 + 0.2);
}
