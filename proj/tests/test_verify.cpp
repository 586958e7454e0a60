#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "bhblow/error.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/verify.hpp"

using namespace bhblow;

TEST_SUITE("verify") {
  TEST_CASE("ledger identifiers are pinned") {
    const std::vector<std::string> expected{
        "near.U_tilde",   "near.dU_tilde",   "near.d2U_tilde",  "near.d3U_tilde",   "near.d4U_tilde",
        "at0.d3U_tilde",  "at0.d3U",         "middle.U_tilde",  "middle.dU_tilde",  "middle.d2U",
        "middle.d3U",     "middle.U",        "middle.dU",       "far.dU",           "far.d2U",
        "far.d3U",        "global.dU_L2",    "global.d5U_L2",   "global.U_shift_Linf", "global.dU_Linf",
        "modulation.tau", "modulation.xi"};
    CHECK(bootstrap_ids() == expected);
    CHECK(std::set<std::string>(expected.begin(), expected.end()).size() == expected.size());
  }

  TEST_CASE("config invariants") {
    BootstrapConfig c;
    CHECK(c.l() == doctest::Approx(std::pow(std::log(50.0), -2)));
    CHECK(c.L_of_s(2.0) == doctest::Approx(0.5 * std::exp(3.0)));
    c.M = 5.0;  // l = 0.385 >= 1/5
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = BootstrapConfig{};
    c.epsilon = 0.5;
    CHECK_THROWS_AS(validate(c), ParameterError);
  }

  TEST_CASE("interpolation is an equality for one Fourier mode") {
    auto g = make_grid(128, std::numbers::pi);
    const InterpolationReport r = check_interpolation(Field::from_function(g, [](double x) { return std::sin(5 * x); }));
    REQUIRE(r.items.size() == 3);
    for (const auto& it : r.items) CHECK(std::abs(it.margin) < 1e-12);
  }

  TEST_CASE("interpolation holds with margin for a random band-limited field") {
    auto g = make_grid(256, 1.0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    std::vector<cplx> spec(g->modes(), 0.0);
    for (std::size_t j = 1; j < 60; ++j) spec[j] = {d(rng), d(rng)};
    const InterpolationReport r = check_interpolation(Field::from_spectrum(g, spec));
    for (const auto& it : r.items) CHECK(it.margin > 1e-3);
    CHECK(r.all_hold());
  }

  TEST_CASE("rate bound on the exact law") {
    TimeSeries s;
    for (int k = 0; k < 200; ++k) {
      const double t = -1.0 + 0.99 * (1.0 - std::pow(0.97, k));
      s.records.push_back(Record{t, 1.0 / (0.0 - t), 0, 0, 0, 0, 0});
    }
    const RateReport r = check_blowup_rate_bound(s, 0.0);
    CHECK(r.product_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.product_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.product_ok);
  }

  TEST_CASE("exact scaled data satisfies the near and middle bounds at the first frame") {
    DataSpec d;
    d.epsilon = 0.1;
    d.cutoff_inner = 0.5;
    d.cutoff_outer = 1.0;
    const Field u = build_u0(d, make_grid(16384, 4.0));
    const TrackEntry e = make_track_entry(Snapshot{-0.1, u}, nullptr);
    std::vector<SelfSimilarFrame> frames{extract_frame(PhysState{-0.1, u}, e)};
    ModulationTrack track{{e}};
    BootstrapConfig cfg;
    cfg.epsilon = 0.1;
    const BootstrapReport rep = check_bootstrap(frames, track, cfg);
    REQUIRE(rep.items.size() == bootstrap_ids().size());
    for (const BootstrapItem& it : rep.items) {
      CAPTURE(it.id);
      if (it.region == "near" || it.region == "middle" || it.region == "at-0") {
        CHECK(it.status == CheckStatus::pass);
        CHECK(it.worst_margin > 0.0);
      }
      if (it.status == CheckStatus::unchecked) CHECK_FALSE(it.reason.empty());
    }
    CHECK(rep.find("global.dU_L2")->status == CheckStatus::pass);
    CHECK(rep.find("no.such.id") == nullptr);
  }
}
