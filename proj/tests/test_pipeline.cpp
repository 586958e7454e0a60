#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "bhblow/error.hpp"
#include "bhblow/pipeline.hpp"

using namespace bhblow;
using nlohmann::json;

namespace {

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.name = "small";
  c.n = 16384;
  c.half_width = 4.0;
  c.data = DataSpec{0.1, 50.0, 0.5, 1.0, 0.0, 0.0, 1};
  c.t0 = -0.1;
  c.bootstrap.epsilon = 0.1;
  c.output = out.string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("sweep input checks") {
    CHECK_THROWS_AS(sweep(preset("full"), {}), ParameterError);
    CHECK_THROWS_AS(sweep_member(preset("full"), -1.0), ParameterError);
  }

  TEST_CASE("sweep members keep the inner scale resolved") {
    const RunConfig t = preset("full");
    const double cells = std::pow(t.data.epsilon, 1.5) / (2 * t.half_width / t.n);
    for (double eps : {0.1, 0.03, 0.01}) {
      CAPTURE(eps);
      const RunConfig c = sweep_member(t, eps);
      CHECK(c.data.epsilon == eps);
      CHECK(c.t0 == -eps);
      CHECK(std::pow(eps, 1.5) <= 0.1 * c.data.cutoff_inner * (1 + 1e-12));
      CHECK(c.half_width >= t.half_width);
      CHECK(std::pow(eps, 1.5) / (2 * c.half_width / c.n) >= cells * (1 - 1e-9));
      CHECK((c.n & (c.n - 1)) == 0);
    }
    CHECK(sweep_member(t, 0.01).n == t.n);
  }

  TEST_CASE("small end-to-end run is complete and deterministic") {
    const fs::path base = fs::temp_directory_path() / "bhblow_pipeline_test";
    fs::remove_all(base);
    const RunConfig c = small_run(base / "a");
    REQUIRE(run_experiment(c) == 0);

    const json rep = read_json(base / "a" / "report.json");
    REQUIRE(rep.contains("artifacts"));
    std::set<std::string> listed;
    for (const auto& f : rep["artifacts"]) {
      listed.insert(f.get<std::string>());
      CHECK(fs::exists(base / "a" / f.get<std::string>()));
    }
    for (const char* f : {"config.json", "timeseries.csv", "evolve.json", "frames.csv", "convergence.json",
                          "cusp.json", "bootstrap.json", "lagrangian.json", "interpolation.json", "rate.json"})
      CHECK(listed.count(f) == 1);
    CHECK(rep["l2_drift_max"].get<double>() < 1e-10);

    const RunData back = load_run(base / "a");
    CHECK(to_json(back.config) == to_json(c));
    CHECK(back.result.snapshots.size() == read_json(base / "a" / "evolve.json")["snapshots"].size());

    REQUIRE(run_experiment(small_run(base / "b")) == 0);
    for (const auto& e : fs::directory_iterator(base / "a")) {
      const std::string name = e.path().filename().string();
      if (name == "evolve.json" || name == "report.json" || name == "config.json") continue;
      CAPTURE(name);
      CHECK(slurp(e.path()) == slurp(base / "b" / name));
    }
    fs::remove_all(base);
  }
}
