#include <sstream>

#include <doctest.h>

#include "cbank/config.hpp"
#include "cbank/errors.hpp"
#include "fixtures.hpp"

using namespace cbank;

namespace {

const char* kGoodConfig =
    "# 1:89.11 scale test hull\n"
    "L = 3.984\n"
    "B = 0.572\n"
    "T0 = 0.163\n"
    "CB = 0.661\n"
    "m = 245.8\n"
    "Iz = 219.2\n"
    "xG = -0.107\n"
    "W = 7.0\n"
    "D = 0.22\n"
    "rho = 1000\n";

ModelConfig parse(const std::string& text) {
  std::istringstream in(text);
  return read_model_config(in, "test.cfg");
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("a well-formed config parses into geometry") {
  const ModelConfig cfg = parse(kGoodConfig);
  CHECK(cfg.vessel.length == 3.984);
  CHECK(cfg.vessel.beam == 0.572);
  CHECK(cfg.vessel.cb == 0.661);
  CHECK(cfg.vessel.xg == -0.107);
  CHECK(cfg.canal.width == 7.0);
  CHECK(cfg.canal.rho == 1000.0);
}

TEST_CASE("comments and blank lines are ignored") {
  const ModelConfig cfg = parse(std::string("\n  # leading comment\n") + kGoodConfig +
                                "  # trailing\n\n");
  CHECK(cfg.vessel.draft == 0.163);
}

TEST_CASE("a missing key is reported by name") {
  std::string text = kGoodConfig;
  text.erase(text.find("Iz = 219.2\n"), 11);
  CHECK_THROWS_WITH_AS(parse(text), doctest::Contains("Iz"), SchemaError);
}

TEST_CASE("unknown and duplicate keys are rejected") {
  CHECK_THROWS_AS(parse(std::string(kGoodConfig) + "Cd = 0.1\n"), SchemaError);
  CHECK_THROWS_AS(parse(std::string(kGoodConfig) + "L = 4.0\n"), SchemaError);
}

TEST_CASE("a malformed value names its line") {
  std::string text = kGoodConfig;
  text.replace(text.find("245.8"), 5, "24x.8");
  CHECK_THROWS_WITH_AS(parse(text), doctest::Contains(":6"), ParseError);
}

TEST_CASE("geometry invariants are enforced") {
  std::string text = kGoodConfig;
  text.replace(text.find("CB = 0.661"), 10, "CB = 1.500");
  CHECK_THROWS_AS(parse(text), ValueError);

  text = kGoodConfig;
  text.replace(text.find("W = 7.0"), 7, "W = 0.5");  // narrower than the beam
  CHECK_THROWS_AS(parse(text), ValueError);
}

TEST_CASE("missing file is a value error") {
  CHECK_THROWS_AS(load_model_config("/nonexistent/model.cfg"), ValueError);
}

TEST_CASE("file round trip") {
  const auto path = cbank::testing::write_temp("model.cfg", kGoodConfig);
  const ModelConfig cfg = load_model_config(path.string());
  CHECK(cfg.vessel.mass == 245.8);
  CHECK(cfg.canal.depth == 0.22);
}

TEST_SUITE_END();
