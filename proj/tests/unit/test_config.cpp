#include <string>

#include "chemokin/config.hpp"
#include "chemokin/error.hpp"
#include "doctest.h"

using namespace chemokin;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config resolves to the defaults") {
  const auto c = parse_config("{}");
  CHECK(c.tier == Tier::Closure);
  CHECK(c.params.kR == 0.005);
  CHECK(c.params.N == 6);
  CHECK(c.env.G_list == std::vector<double>{1e-3});
  CHECK(c.agents.count == 100000);
  CHECK(c.kinetic.eps_list.size() == 4);
}

TEST_CASE("fields are read from their sections") {
  const auto c = parse_config(R"({
    "tier": "velocity-sweep",
    "params": {"kR": 0.01, "N": 5},
    "env": {"G_list": [1e-4, 2e-4]},
    "numerics": {"seed": 99, "threads": 3,
                 "agents": {"count": 10, "dt": 0.02},
                 "kinetic": {"scaling": "case2", "mu": 0.5},
                 "macro": {"equation": "keller-segel", "times": [0, 1]}},
    "sweep": {"kR_list": [0.001], "monte_carlo": true},
    "outputs": {"dir": "res"}})");
  CHECK(c.tier == Tier::VelocitySweep);
  CHECK(c.params.kR == 0.01);
  CHECK(c.params.N == 5);
  CHECK(c.env.G_list == std::vector<double>{1e-4, 2e-4});
  CHECK(c.seed == 99);
  CHECK(c.threads == 3);
  CHECK(c.agents.count == 10);
  CHECK(c.agents.dt == 0.02);
  CHECK(c.kinetic.scaling == "case2");
  CHECK(c.kinetic.mu == 0.5);
  CHECK(c.macro.equation == "keller-segel");
  CHECK(c.sweep.monte_carlo);
  CHECK(c.output_dir == "res");
  CHECK(parse_config(R"({"env": {"G": 2e-3}})").env.G_list == std::vector<double>{2e-3});
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(error_of(R"({"bogus": 1})").find("'bogus'") != std::string::npos);
  CHECK(error_of(R"({"params": {"kr": 0.01}})").find("'params.kr'") != std::string::npos);
  CHECK(error_of(R"({"numerics": {"agents": {"cnt": 5}}})").find("'numerics.agents.cnt'") != std::string::npos);
}

TEST_CASE("invalid values name the offending field") {
  CHECK(error_of(R"({"params": {"kR": -1}})").find("params.kR") != std::string::npos);
  CHECK(error_of(R"({"params": {"a0": 1.5}})").find("params.a0") != std::string::npos);
  CHECK(error_of(R"({"params": {"N": 2.5}})").find("params.N") != std::string::npos);
  CHECK(error_of(R"({"env": {"G_list": [-1e-3]}})").find("env.G_list") != std::string::npos);
  CHECK(error_of(R"({"env": {"G": 1e-3, "G_list": [1e-3]}})").find("env.G") != std::string::npos);
  CHECK(error_of(R"({"env": {"x_min": 0}})").find("env.x_min") != std::string::npos);
  CHECK(error_of(R"({"numerics": {"agents": {"dt": "fast"}}})").find("numerics.agents.dt") != std::string::npos);
  CHECK(error_of(R"({"numerics": {"kinetic": {"eps": 2}}})").find("numerics.kinetic.eps") != std::string::npos);
  CHECK(error_of(R"({"numerics": {"kinetic": {"scaling": "case3"}}})").find("numerics.kinetic.scaling") !=
        std::string::npos);
  CHECK(error_of(R"({"tier": "plots"})").find("tier") != std::string::npos);
  CHECK(error_of("{not json").find("invalid JSON") != std::string::npos);
  CHECK(error_of(R"({"params": 3})").find("params must be an object") != std::string::npos);
}

TEST_CASE("resolved config round-trips and the hash is stable") {
  const auto c = parse_config(R"({"params": {"kR": 0.001}, "env": {"G_list": [1e-3, 2e-3]}})");
  const auto text = resolved_config_json(c);
  const auto back = parse_config(text);
  CHECK(resolved_config_json(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);

  auto d = c;
  d.output_dir = "elsewhere";
  d.threads = 8;
  CHECK(config_hash(d) == config_hash(c));
  d.seed = 2;
  CHECK(config_hash(d) != config_hash(c));
  auto e = c;
  e.params.m0 = 2.0;
  CHECK(config_hash(e) != config_hash(c));
}
