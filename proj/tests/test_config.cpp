#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "bhblow/config.hpp"
#include "bhblow/error.hpp"

using namespace bhblow;
using nlohmann::json;

namespace {
std::string config_error(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("round trip through json and disk") {
    RunConfig c = preset("linear-oracle");
    c.step.cfl = 0.25;
    c.data.seed = 99;
    const RunConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(std::isinf(back.step.m_stop));
    CHECK(to_json(c)["step"]["m_stop"].is_null());
    CHECK(back.step.t_end == doctest::Approx(2.0 * std::numbers::pi));

    const auto p = std::filesystem::temp_directory_path() / "bhblow_cfg_test.json";
    save_config(c, p);
    CHECK(to_json(load_config(p)) == to_json(c));
    std::filesystem::remove(p);
  }

  TEST_CASE("errors name the field") {
    CHECK(config_error({{"grid", {{"n", 64}, {"L_dom", 1.0}, {"bogus", 1}}}}).find("grid.bogus") != std::string::npos);
    CHECK(config_error({{"colour", "red"}}).find("colour: unknown key") != std::string::npos);
    CHECK(config_error({{"step", {{"cfl", "fast"}}}}).find("step.cfl: wrong type") != std::string::npos);
    CHECK(config_error({{"grid", {{"n", -3}}}}).find("grid.n") != std::string::npos);
    CHECK(config_error({{"mode", "sideways"}}).find("mode") == 0);
    CHECK(config_error({{"initial", "file"}}).find("data_file") == 0);
    CHECK(config_error({{"step", {{"cfl", -1.0}}}}).find("step") == 0);
    CHECK(config_error({{"grid", {{"n", 1024}}}}).find("grid.n: dx") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
  }

  TEST_CASE("t0 follows the initial kind unless given") {
    CHECK(config_from_json(json::object()).t0 == doctest::Approx(-1e-2));
    CHECK(config_from_json({{"data", {{"epsilon", 0.005}}}}).t0 == doctest::Approx(-0.005));
    CHECK(config_from_json({{"t0", -0.5}}).t0 == -0.5);
    json sa = to_json(preset("small-amplitude"));
    sa.erase("t0");
    CHECK(config_from_json(sa).t0 == 0.0);
  }

  TEST_CASE("every preset validates and round trips") {
    for (const std::string& name : preset_names()) {
      CAPTURE(name);
      const RunConfig c = preset(name);
      CHECK_NOTHROW(validate(c));
      CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
    }
    CHECK_THROWS_AS(preset("nope"), ConfigError);
  }
}
