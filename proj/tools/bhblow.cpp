// bhblow: command-line driver for the Burgers-Hilbert blowup experiments.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bhblow/config.hpp"
#include "bhblow/error.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/pipeline.hpp"
#include "bhblow/profile.hpp"
#include "bhblow/snapshot.hpp"

using namespace bhblow;
using nlohmann::json;

namespace {

void print_json(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(out, std::ios::trunc);
  if (!os) throw IoError("cannot write " + out);
  os << j.dump(2) << "\n";
}

json audit_json(const AuditReport& rep) {
  json items = json::array();
  for (const AuditItem& it : rep.items)
    items.push_back({{"name", it.name},
                     {"description", it.description},
                     {"measured", it.measured},
                     {"bound", it.bound},
                     {"margin", it.margin},
                     {"pass", it.pass}});
  return {{"all_pass", rep.all_pass()},
          {"slope_location", rep.slope_location},
          {"slope_unique", rep.slope_unique},
          {"items", items}};
}

RunConfig config_or_preset(const std::string& file, const std::string& name) {
  if (!file.empty() && !name.empty()) throw ConfigError("give either --config or --preset, not both");
  if (!file.empty()) return load_config(file);
  return preset(name.empty() ? "full" : name);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    const std::string tok = s.substr(pos, end - pos);
    if (!tok.empty()) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParameterError("not a number: '" + tok + "'");
      }
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Burgers-Hilbert shock formation: data, evolution, self-similar analysis"};
  app.require_subcommand(1);
  int status = 0;

  // make-data
  DataSpec ds;
  std::size_t md_n = 262144;
  double md_L = 8.0;
  std::string md_out = "u0.bhf";
  auto* make = app.add_subcommand("make-data", "Write scaled-profile initial data as a snapshot");
  make->add_option("--epsilon", ds.epsilon, "Amplitude parameter")->capture_default_str();
  make->add_option("--M", ds.M, "Bootstrap constant")->capture_default_str();
  make->add_option("--n", md_n, "Grid points")->capture_default_str();
  make->add_option("--L", md_L, "Half width of the periodic box")->capture_default_str();
  make->add_option("--cutoff-inner", ds.cutoff_inner)->capture_default_str();
  make->add_option("--cutoff-outer", ds.cutoff_outer)->capture_default_str();
  make->add_option("--kappa0", ds.kappa0)->capture_default_str();
  make->add_option("--perturbation", ds.perturbation, "Bump amplitude, at most epsilon^{1/8}")->capture_default_str();
  make->add_option("--seed", ds.seed)->capture_default_str();
  make->add_option("-o,--out", md_out)->capture_default_str();
  make->callback([&] {
    validate(ds, md_L);
    const Field u0 = build_u0(ds, make_grid(md_n, md_L));
    write_snapshot(md_out, u0, -ds.epsilon);
    std::printf("wrote %s (n = %zu, L = %g, t = %g)\n", md_out.c_str(), md_n, md_L, -ds.epsilon);
  });

  // audit-data
  std::string ad_file, ad_out;
  DataSpec ad;
  auto* audit = app.add_subcommand("audit-data", "Check a data snapshot against the initial-data conditions");
  audit->add_option("file", ad_file)->required()->check(CLI::ExistingFile);
  audit->add_option("--epsilon", ad.epsilon)->capture_default_str();
  audit->add_option("--M", ad.M)->capture_default_str();
  audit->add_option("--cutoff-inner", ad.cutoff_inner)->capture_default_str();
  audit->add_option("--cutoff-outer", ad.cutoff_outer)->capture_default_str();
  audit->add_option("-o,--out", ad_out, "JSON output (stdout if omitted)");
  audit->callback([&] {
    const Snapshot s = read_snapshot(ad_file);
    const AuditReport rep = audit_u0(s.u, ad);
    print_json(audit_json(rep), ad_out);
    if (!rep.all_pass()) status = 4;
  });

  // evolve
  std::string ev_data, ev_mode = "full", ev_out = "runs/r1";
  double ev_eps = 1e-2;
  StepControl ctl;
  ctl.snapshot_ratio = 1.25;
  auto* evolve = app.add_subcommand("evolve", "Integrate a snapshot until a stop criterion fires");
  evolve->add_option("--data", ev_data)->required()->check(CLI::ExistingFile);
  evolve->add_option("--mode", ev_mode, "full | burgers_only | linear_only")->capture_default_str();
  evolve->add_option("--cfl", ctl.cfl)->capture_default_str();
  evolve->add_option("--slope-factor", ctl.slope_factor)->capture_default_str();
  evolve->add_option("--guard", ctl.resolution_guard, "Stop when m^{-3/2} < guard*dx")->capture_default_str();
  evolve->add_option("--m-stop", ctl.m_stop);
  evolve->add_option("--t-end", ctl.t_end);
  evolve->add_option("--max-dt", ctl.max_dt)->capture_default_str();
  evolve->add_option("--max-steps", ctl.max_steps)->capture_default_str();
  evolve->add_option("--snapshot-ratio", ctl.snapshot_ratio)->capture_default_str();
  evolve->add_option("--epsilon", ev_eps, "Recorded for the later analysis stages")->capture_default_str();
  evolve->add_option("--out", ev_out)->capture_default_str();
  evolve->callback([&] {
    const Snapshot s = read_snapshot(ev_data);
    RunConfig c;
    c.name = "evolve";
    c.n = s.u.size();
    c.half_width = s.u.grid().half_width();
    c.initial = InitialKind::file;
    c.data_file = fs::absolute(ev_data).string();
    c.data.epsilon = ev_eps;
    c.bootstrap.epsilon = ev_eps;
    c.t0 = s.t;
    c.step = ctl;
    c.mode = parse_mode(ev_mode);
    c.output = ev_out;
    validate(c);
    RunData run;
    run.config = c;
    const auto start = std::chrono::steady_clock::now();
    run.result = run_to_blowup(s.u, s.t, ctl, c.mode);
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_evolution(ev_out, run);
    stage_oracle(ev_out, run);
    const json rep = write_report(ev_out);
    std::cout << rep.dump(2) << "\n";
  });

  // selfsim
  std::string ss_run;
  FrameOptions fo;
  auto* selfsim = app.add_subcommand("selfsim", "Self-similar frames, modulation and cusp analysis of a run");
  selfsim->add_option("--run", ss_run)->required()->check(CLI::ExistingDirectory);
  selfsim->add_option("--window", fo.window)->capture_default_str();
  selfsim->add_option("--per-side", fo.per_side)->capture_default_str();
  selfsim->add_option("--x-min", fo.x_min)->capture_default_str();
  selfsim->callback([&] {
    const RunData run = load_run(ss_run);
    const FrameSet fset = compute_frames(run, fo);
    stage_selfsim(ss_run, run, fset);
    stage_lagrangian(ss_run, run, fset);
    stage_interpolation(ss_run, run);
    stage_rate(ss_run, run);
    const json rep = write_report(ss_run);
    std::cout << rep.dump(2) << "\n";
    for (const std::string& s : fset.skipped) std::fprintf(stderr, "skipped %s\n", s.c_str());
    if (fset.frames.empty()) status = 3;
  });

  // bootstrap-check
  std::string bc_run;
  BootstrapConfig bcfg;
  auto* boot = app.add_subcommand("bootstrap-check", "Evaluate the bootstrap inequality ledger on a run");
  boot->add_option("--run", bc_run)->required()->check(CLI::ExistingDirectory);
  boot->add_option("--M", bcfg.M)->capture_default_str();
  boot->add_option("--epsilon", bcfg.epsilon)->capture_default_str();
  boot->add_option("--gate", bcfg.high_derivative_gate, "Orders 4, 5 need m^{-3/2} >= gate*dx")->capture_default_str();
  boot->callback([&] {
    validate(bcfg);
    const RunData run = load_run(bc_run);
    const FrameSet fset = compute_frames(run, run.config.frames);
    stage_bootstrap(bc_run, run, fset, bcfg);
    write_report(bc_run);
    std::ifstream is(fs::path(bc_run) / "bootstrap.json");
    const json j = json::parse(is);
    if (!j["available"].get<bool>()) {
      std::printf("bootstrap ledger unavailable: %s\n", j["reason"].get<std::string>().c_str());
      status = 3;
      return;
    }
    BootstrapReport rep;
    for (const json& it : j["items"]) {
      BootstrapItem b;
      b.id = it["id"];
      b.region = it["region"];
      b.description = it["description"];
      b.worst_margin = it["worst_margin"].is_null() ? NAN : it["worst_margin"].get<double>();
      b.worst_X = it["worst_X"].is_null() ? NAN : it["worst_X"].get<double>();
      b.worst_s = it["worst_s"].is_null() ? NAN : it["worst_s"].get<double>();
      b.points = it["points"];
      const std::string st = it["status"];
      b.status = st == "pass" ? CheckStatus::pass : st == "fail" ? CheckStatus::fail : CheckStatus::unchecked;
      b.reason = it["reason"];
      rep.items.push_back(b);
    }
    std::fputs(bootstrap_table(rep).c_str(), stdout);
  });

  // profile-check
  double pc_xmax = 1e4;
  std::size_t pc_samples = 20000;
  std::string pc_out = ".";
  auto* prof = app.add_subcommand("profile-check", "Margins of the profile bounds and a derivative table");
  prof->add_option("--xmax", pc_xmax)->capture_default_str();
  prof->add_option("--samples", pc_samples)->capture_default_str();
  prof->add_option("--out", pc_out, "Directory for profile_bounds.json and profile_table.csv")->capture_default_str();
  prof->callback([&] {
    const std::vector<double> xs = profile::default_bound_samples(pc_xmax, pc_samples);
    const profile::ProfileBoundsReport rep = profile::profile_bound_margins(xs);
    fs::create_directories(pc_out);
    json bounds = json::array();
    for (const auto& b : rep.bounds)
      bounds.push_back({{"name", b.name},
                        {"description", b.description},
                        {"worst_margin", b.worst_margin},
                        {"worst_X", b.worst_X},
                        {"samples", b.samples},
                        {"pass", b.pass}});
    const json summary = {{"xmax", pc_xmax},
                          {"samples", xs.size()},
                          {"rounding_slack", rep.rounding_slack},
                          {"all_pass", rep.all_pass()},
                          {"bounds", bounds}};
    print_json(summary, (fs::path(pc_out) / "profile_bounds.json").string());
    std::ofstream os(fs::path(pc_out) / "profile_table.csv", std::ios::trunc);
    os << "X,U,dU,d2U,d3U,d4U,d5U\n";
    char buf[64];
    for (double X : xs) {
      const profile::ProfileEval e = profile::bar_u_derivs(X, 5);
      std::snprintf(buf, sizeof buf, "%.17g", X);
      os << buf;
      for (int k = 0; k <= 5; ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", e.d(k));
        os << buf;
      }
      os << '\n';
    }
    for (const auto& b : rep.bounds)
      std::printf("%-18s %-5s margin %+.4e at X = %.6g\n", b.name.c_str(), b.pass ? "pass" : "FAIL", b.worst_margin,
                  b.worst_X);
  });

  // sweep
  std::string sw_config, sw_preset, sw_eps = "0.1,0.03,0.01", sw_out;
  unsigned sw_jobs = 0;
  auto* sw = app.add_subcommand("sweep", "Run a configuration for several epsilon values");
  sw->add_option("--config", sw_config, "Template configuration file");
  sw->add_option("--preset", sw_preset, "Template preset");
  sw->add_option("--eps", sw_eps, "Comma-separated epsilon list")->capture_default_str();
  sw->add_option("--jobs", sw_jobs, "Concurrent runs (0: hardware threads)")->capture_default_str();
  sw->add_option("--out", sw_out, "Sweep directory (overrides the template output)");
  sw->callback([&] {
    RunConfig t = config_or_preset(sw_config, sw_preset);
    if (!sw_out.empty()) t.output = sw_out;
    const SweepResult res = sweep(t, parse_list(sw_eps), sw_jobs);
    std::printf("%-10s %-8s %-8s %-14s %-10s %-10s\n", "epsilon", "n", "status", "tstar", "nu_hat", "cusp");
    for (const SweepRow& r : res.rows) {
      std::printf("%-10g %-8zu %-8d %-14.6g %-10.5g %-10.5g", r.epsilon, r.n, r.status, r.tstar.value_or(NAN),
                  r.nu_hat.value_or(NAN), r.cusp.value_or(NAN));
      if (!r.error.empty()) std::printf("  %s", r.error.c_str());
      std::printf("\n");
      if (r.status != 0) status = 3;
    }
    if (res.tstar_slope) std::printf("log|T*| vs log eps slope: %.4f\n", *res.tstar_slope);
  });

  // report
  std::string rp_run;
  auto* report = app.add_subcommand("report", "Rebuild report.json from the artifacts of a run");
  report->add_option("--run", rp_run)->required()->check(CLI::ExistingDirectory);
  report->callback([&] { std::cout << write_report(rp_run).dump(2) << "\n"; });

  // run
  std::string rn_config, rn_preset, rn_out;
  auto* run = app.add_subcommand("run", "Whole pipeline from a configuration file or preset");
  run->add_option("--config", rn_config);
  run->add_option("--preset", rn_preset, "One of: full, burgers-oracle, linear-oracle, bootstrap, small-amplitude");
  run->add_option("--out", rn_out, "Output directory (overrides the configuration)");
  run->callback([&] {
    RunConfig c = config_or_preset(rn_config, rn_preset);
    if (!rn_out.empty()) c.output = rn_out;
    status = run_experiment(c);
    std::ifstream is(fs::path(c.output) / "report.json");
    std::cout << is.rdbuf() << "\n";
  });

  // preset
  std::string pr_name, pr_out;
  auto* pre = app.add_subcommand("preset", "Print a built-in configuration");
  pre->add_option("name", pr_name)->required();
  pre->add_option("-o,--out", pr_out);
  pre->callback([&] { print_json(to_json(preset(pr_name)), pr_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "bhblow: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bhblow: %s\n", e.what());
    return 4;
  }
  return status;
}
