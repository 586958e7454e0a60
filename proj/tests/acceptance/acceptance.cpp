// Acceptance driver: `prepare DIR` produces the runs, `check N DIR` prints
// one PASS/FAIL line for criterion N, `all DIR` does both for 1..10.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bhblow/config.hpp"
#include "bhblow/error.hpp"
#include "bhblow/hilbert.hpp"
#include "bhblow/pipeline.hpp"
#include "bhblow/profile.hpp"

using namespace bhblow;
using nlohmann::json;

namespace {

const std::vector<double> kSweepEps{0.1, 0.03, 0.01};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  // Records one sub-check; the verdict passes only if all of them do.
  Verdict& item(const std::string& name, bool ok, const std::string& info = "") {
    pass = pass && ok;
    detail << ' ' << name << '=' << (ok ? "ok" : "FAIL");
    if (!info.empty()) detail << '(' << info << ')';
    return *this;
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw IoError("missing " + p.string() + " (run `acceptance prepare` first)");
  return json::parse(is);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path full_run(const fs::path& dir) {
  RunConfig t = preset("full");
  t.output = (dir / "sweep").string();
  return sweep_member(t, 0.01).output;
}

RunConfig repeat_config(const fs::path& dir) {
  RunConfig t = preset("full");
  t.output = (dir / "sweep").string();
  RunConfig c = sweep_member(t, 0.1);
  c.output = (dir / "repeat").string();
  return c;
}

// ---------------------------------------------------------------- prepare

int prepare(const fs::path& dir) {
  fs::create_directories(dir);
  auto timed = [](const std::string& what, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    std::cout << "prepared " << what << " in " << g(seconds_since(t0)) << " s" << std::endl;
  };
  timed("burgers", [&] {
    RunConfig c = preset("burgers-oracle");
    c.output = (dir / "burgers").string();
    run_experiment(c);
  });
  timed("sweep", [&] {
    RunConfig t = preset("full");
    t.output = (dir / "sweep").string();
    sweep(t, kSweepEps, 1);
  });
  timed("bootstrap", [&] {
    RunConfig c = preset("bootstrap");
    c.output = (dir / "bootstrap").string();
    run_experiment(c);
  });
  timed("repeat", [&] { run_experiment(repeat_config(dir)); });
  return 0;
}

// --------------------------------------------------------------- criteria

Verdict profile_identities() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double ode = 0.0, cubic = 0.0;
  for (int i = 0; i < 10000; ++i) {
    // Symmetric log-spaced plan over 1e-6 <= |X| <= 1e4.
    const double a = std::pow(10.0, -6.0 + 10.0 * (i / 2) / 4999.0);
    const double X = i % 2 ? -a : a;
    ode = std::max(ode, std::abs(profile::ode_residual(X)));
    cubic = std::max(cubic, std::abs(profile::cubic_residual(X)));
  }
  const double d3 = profile::bar_u_derivs(0.0, 3).d(3);
  const double secs = seconds_since(t0);
  v.item("ode", ode <= 1e-12, g(ode)).item("cubic", cubic <= 1e-12, g(cubic));
  v.item("d3U(0)", std::abs(d3 - 6.0) <= 1e-10, g(d3)).item("time", secs < 1.0, g(secs) + "s");
  return v;
}

Verdict profile_bounds() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto xs = profile::default_bound_samples();
  const auto rep = profile::profile_bound_margins(xs);
  const double secs = seconds_since(t0);
  for (const auto& b : rep.bounds) v.item(b.name, b.pass, "margin " + g(b.worst_margin) + " at X=" + g(b.worst_X));
  v.item("time", secs < 5.0, g(secs) + "s");
  return v;
}

double bump(double y, double c, double w) {
  const double z = (y - c) / w;
  return std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
}

Verdict hilbert_operator() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  {
    auto grid = make_grid(1024, 1.0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    auto random_field = [&] {
      std::vector<cplx> spec(grid->modes(), 0.0);
      for (std::size_t k = 1; k < 300; ++k) spec[k] = {nd(rng), nd(rng)};
      return Field::from_spectrum(grid, spec);
    };
    const Field f = random_field(), h = random_field();
    const double skew = std::abs(inner(hilbert_multiplier(f), h) + inner(f, hilbert_multiplier(h))) /
                        (norms(f).l2 * norms(h).l2);
    const double iso = std::abs(norms(hilbert_multiplier(f)).l2 / norms(f).l2 - 1.0);
    v.item("skew", skew <= 1e-12, g(skew)).item("isometry", iso <= 1e-12, g(iso));
  }
  {
    const double L = 64.0;
    auto grid = make_grid(16384, L);
    PVQuadratureSpec spec;
    spec.outer_cutoff = 8.0;  // covers every support from every query point
    double worst = 0.0;
    const std::vector<std::function<double(double)>> bumps{
        [](double y) { return bump(y, 0.0, 1.0); },
        [](double y) { return bump(y, 0.3, 0.5); },
        [](double y) { return y * bump(y, 0.0, 1.0) - 0.5 * bump(y, -1.5, 0.4); }};
    for (const auto& f : bumps) {
      const Field h = hilbert_multiplier(Field::from_function(grid, f));
      double peak = 0.0;
      for (std::size_t j = 0; j < grid->n(); ++j) peak = std::max(peak, std::abs(h[j]));
      for (double x : {-2.2, -1.1, -0.45, 0.0, 0.2, 0.7, 1.3, 3.0})
        worst = std::max(worst, std::abs(interp(h, x) - hilbert_pv(f, x, spec).value) / peak);
    }
    v.item("pv", worst < 1e-3, g(worst));
  }
  const double secs = seconds_since(t0);
  v.item("time", secs < 10.0, g(secs) + "s");
  return v;
}

Verdict linear_oracle(const fs::path& dir) {
  Verdict v;
  RunConfig c = preset("linear-oracle");
  c.output = (dir / "linear").string();
  const auto t0 = std::chrono::steady_clock::now();
  run_experiment(c);
  const double secs = seconds_since(t0);
  const json o = read_json(dir / "linear" / "oracle.json");
  const double dev = o["max_abs_deviation"].get<double>();
  v.item("n", c.n == 4096, std::to_string(c.n));
  v.item("elapsed", std::abs(o["elapsed"].get<double>() - 2 * std::numbers::pi) < 1e-12, g(o["elapsed"].get<double>()));
  v.item("max_dev", dev <= 1e-6, g(dev)).item("time", secs < 30.0, g(secs) + "s");
  return v;
}

Verdict burgers_oracle(const fs::path& dir) {
  Verdict v;
  const fs::path run = dir / "burgers";
  const json o = read_json(run / "oracle.json");
  const json conv = read_json(run / "convergence.json");
  if (o["tstar"].is_null()) {
    v.item("fit", false, o.value("reason", "no fit"));
    return v;
  }
  const double tstar = o["tstar"].get<double>(), ratio = o["offset_ratio"].get<double>();
  const double slope = o["slope"].get<double>();
  v.item("tstar", std::abs(tstar) <= 1e-4, g(tstar));
  v.item("offset_ratio", std::abs(ratio - 1.0) <= 0.01, g(ratio));
  v.item("slope", std::abs(slope + 1.0) <= 0.02, g(slope));
  const bool have = conv.value("available", false);
  const double dist = have ? conv["final_dist"].get<double>() : NAN;
  v.item("frame_dist", have && dist <= 1e-3, g(dist));
  v.detail << " wall=" << g(read_json(run / "evolve.json")["wall_seconds"].get<double>()) << "s";
  return v;
}

Verdict full_blowup(const fs::path& dir) {
  Verdict v;
  const fs::path run = full_run(dir);
  const json ev = read_json(run / "evolve.json");
  const double drift = ev["l2_drift_max"].get<double>();
  v.item("a:l2_drift", drift < 1e-6 && ev["stop_reason"] == "resolution_guard", g(drift));

  const json rate = read_json(run / "rate.json");
  const bool rate_ok = rate.value("available", false) && rate["product_min"].get<double>() >= 0.5 &&
                       rate["product_max"].get<double>() <= 2.0;
  v.item("b:rate", rate_ok,
         rate.value("available", false)
             ? "[" + g(rate["product_min"].get<double>()) + "," + g(rate["product_max"].get<double>()) + "]"
             : std::string("unavailable"));

  // (c) across the sweep.
  const json sw = read_json(dir / "sweep" / "sweep.json");
  bool c_ok = true;
  std::string c_info;
  std::vector<std::pair<double, double>> ts;  // (eps, |T*|)
  for (const auto& row : sw["rows"]) {
    const double eps = row["epsilon"].get<double>();
    const json rep = read_json(dir / "sweep" / row["dir"].get<std::string>() / "report.json");
    if (row["status"].get<int>() != 0 || !rep.contains("tstar") || rep["tstar"].is_null()) {
      c_ok = false;
      c_info += " eps=" + g(eps) + ":no-fit";
      continue;
    }
    const double t = std::abs(rep["tstar"].get<double>());
    c_ok = c_ok && t <= eps / 2;
    c_info += " |T*(" + g(eps) + ")|=" + g(t);
    ts.emplace_back(eps, t);
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) c_ok = c_ok && ts[i - 1].second < ts[i].second;
  const bool have_slope = sw["tstar_loglog_slope"].is_number();
  const double slope = have_slope ? sw["tstar_loglog_slope"].get<double>() : NAN;
  c_ok = c_ok && ts.size() == kSweepEps.size() && have_slope && slope >= 1.0;
  v.item("c:tstar", c_ok, "slope " + g(slope) + c_info);

  const json cusp = read_json(run / "cusp.json");
  const bool cusp_have = cusp.value("available", false);
  const double ex = cusp_have ? cusp["exponent"].get<double>() : NAN;
  v.item("d:cusp", cusp_have && std::abs(ex + 2.0 / 3.0) <= 0.05, g(ex));

  const json conv = read_json(run / "convergence.json");
  const bool conv_have = conv.value("available", false);
  const double nu = conv_have ? conv["nu_final"].get<double>() : NAN;
  v.item("e:nu", conv_have && std::abs(nu - 6.0) <= std::pow(0.01, 0.25), g(nu));
  const double dist = conv_have ? conv["final_dist"].get<double>() : NAN;
  std::string f_info = g(dist);
  if (conv_have) {
    const auto& fr = conv["frames"];
    f_info += " last3";
    for (std::size_t k = fr.size() >= 3 ? fr.size() - 3 : 0; k < fr.size(); ++k)
      f_info += " " + g(fr[k]["window_sup_dist"].get<double>());
    f_info += conv["precondition_met"].get<bool>() ? " span>=2" : " span<2";
  }
  v.item("f:dist", conv_have && dist <= 0.1 && conv["dist_nonincreasing"].get<bool>(), f_info);
  v.detail << " wall=" << g(ev["wall_seconds"].get<double>()) << "s";
  return v;
}

// Reruns a post-processing stage from the stored run into a scratch
// directory and returns its wall time.
template <class Stage>
double time_stage(const fs::path& run, const fs::path& scratch, Stage&& stage) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunData data = load_run(run);
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  stage(data);
  return seconds_since(t0);
}

Verdict bootstrap_ledger(const fs::path& dir) {
  Verdict v;
  const fs::path run = dir / "bootstrap";
  const json b = read_json(run / "bootstrap.json");
  if (!b.value("available", false)) {
    v.item("available", false, b.value("reason", ""));
    return v;
  }
  v.item("eps_M", b["epsilon"].get<double>() == 0.01 && b["M"].get<double>() == 50.0);
  std::set<std::string> ids;
  for (const auto& it : b["items"]) ids.insert(it["id"].get<std::string>());
  const auto& want = bootstrap_ids();
  v.item("complete", ids == std::set<std::string>(want.begin(), want.end()), std::to_string(ids.size()) + " items");
  for (const auto& it : b["items"]) {
    const std::string region = it["region"], status = it["status"], id = it["id"];
    if (region != "near" && region != "middle" && region != "at-0") continue;
    const bool ok = status == "pass" || (status == "unchecked" && !it["reason"].get<std::string>().empty());
    if (!ok) v.item(id, false, "margin " + g(it["worst_margin"].get<double>()));
  }
  const json* l2 = nullptr;
  for (const auto& it : b["items"])
    if (it["id"] == "global.dU_L2") l2 = &it;
  v.item("dU_L2", l2 && (*l2)["status"] == "pass", l2 ? "margin " + g((*l2)["worst_margin"].get<double>()) : "");
  v.detail << " (passed " << b["passed"] << ", failed " << b["failed"] << ", unchecked " << b["unchecked"] << ")";

  const RunConfig cfg = load_run(run).config;
  const double secs = time_stage(run, dir / "scratch_bootstrap", [&](const RunData& d) {
    stage_bootstrap(dir / "scratch_bootstrap", d, compute_frames(d, cfg.frames), cfg.bootstrap);
  });
  v.item("time", secs < 60.0, g(secs) + "s");
  return v;
}

Verdict lagrangian(const fs::path& dir) {
  Verdict v;
  const fs::path run = full_run(dir);
  const json l = read_json(run / "lagrangian.json");
  if (!l.value("available", false)) {
    v.item("available", false, l.value("reason", ""));
    return v;
  }
  std::size_t truncated = 0;
  for (const auto& s : l["seeds"]) {
    if (s["truncated"].get<bool>()) ++truncated;
    if (!s["pass"].get<bool>())
      v.item("X0=" + g(s["X0"].get<double>()), false,
             "lower " + g(s["lower_margin"].get<double>()) + " upper " + g(s["upper_margin"].get<double>()));
  }
  v.item("all_seeds", l["all_pass"].get<bool>() && !l["seeds"].empty(),
         std::to_string(l["seeds"].size()) + " seeds, s in [" + g(l["s0"].get<double>()) + "," +
             g(l["s1"].get<double>()) + "], " + std::to_string(truncated) + " truncated");
  const double secs = time_stage(run, dir / "scratch_lagrangian", [&](const RunData& d) {
    stage_lagrangian(dir / "scratch_lagrangian", d, compute_frames(d, d.config.frames));
  });
  v.item("time", secs < 60.0, g(secs) + "s");
  return v;
}

Verdict interpolation(const fs::path& dir) {
  Verdict v;
  for (const fs::path& run : {full_run(dir), dir / "bootstrap"}) {
    const json j = read_json(run / "interpolation.json");
    const std::size_t snaps = read_json(run / "evolve.json")["snapshots"].size();
    const bool ok = j.value("available", false) && j["all_positive"].get<bool>() && j["snapshots"].size() == snaps;
    v.item(run.filename().string(), ok,
           std::to_string(j.value("snapshots", json::array()).size()) + " snapshots, worst margin " +
               g(j.value("worst_margin", NAN)));
  }
  const double secs = time_stage(full_run(dir), dir / "scratch_interp",
                                 [&](const RunData& d) { stage_interpolation(dir / "scratch_interp", d); });
  v.item("time", secs < 60.0, g(secs) + "s");
  return v;
}

// JSON with timing and location fields removed.
json numeric_part(json j) {
  if (j.is_object()) {
    for (const char* k : {"wall_seconds", "output", "name", "dir"}) j.erase(k);
    for (auto& [k, val] : j.items()) val = numeric_part(val);
  } else if (j.is_array()) {
    for (auto& val : j) val = numeric_part(val);
  }
  return j;
}

Verdict determinism(const fs::path& dir) {
  Verdict v;
  const fs::path a = repeat_config(dir).output;
  RunConfig t = preset("full");
  t.output = (dir / "sweep").string();
  const fs::path b = sweep_member(t, 0.1).output;
  std::set<std::string> fa, fb;
  for (const auto& e : fs::directory_iterator(a)) fa.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) fb.insert(e.path().filename().string());
  v.item("file_set", fa == fb, std::to_string(fa.size()) + " files");
  std::size_t compared = 0;
  for (const std::string& f : fa) {
    if (!fb.count(f)) continue;
    const bool same = fs::path(f).extension() == ".json"
                          ? numeric_part(read_json(a / f)) == numeric_part(read_json(b / f))
                          : slurp(a / f) == slurp(b / f);
    ++compared;
    if (!same) v.item(f, false, "differs");
  }
  v.item("identical", v.pass, std::to_string(compared) + " compared");
  return v;
}

Verdict run_criterion(int n, const fs::path& dir) {
  switch (n) {
    case 1: return profile_identities();
    case 2: return profile_bounds();
    case 3: return hilbert_operator();
    case 4: return linear_oracle(dir);
    case 5: return burgers_oracle(dir);
    case 6: return full_blowup(dir);
    case 7: return bootstrap_ledger(dir);
    case 8: return lagrangian(dir);
    case 9: return interpolation(dir);
    case 10: return determinism(dir);
  }
  throw ParameterError("criterion must be in 1..10");
}

bool report(int n, const fs::path& dir) {
  Verdict v;
  try {
    v = run_criterion(n, dir);
  } catch (const std::exception& e) {
    v.item("error", false, e.what());
  }
  std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " |" << v.detail.str() << std::endl;
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  app.require_subcommand(1);
  fs::path dir;
  int criterion = 0;
  auto* prep = app.add_subcommand("prepare", "produce the runs the checks read");
  prep->add_option("dir", dir)->required();
  auto* check = app.add_subcommand("check", "evaluate one criterion");
  check->add_option("criterion", criterion)->required()->check(CLI::Range(1, 10));
  check->add_option("dir", dir)->required();
  auto* all = app.add_subcommand("all", "prepare, then evaluate every criterion");
  all->add_option("dir", dir)->required();
  CLI11_PARSE(app, argc, argv);

  try {
    if (*prep) return prepare(dir);
    if (*check) return report(criterion, dir) ? 0 : 1;
    prepare(dir);
    bool ok = true;
    for (int n = 1; n <= 10; ++n) ok = report(n, dir) && ok;
    return ok ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}
