#include "bhblow/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include "bhblow/error.hpp"

namespace bhblow {
using nlohmann::json;

namespace {

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::profile: return "profile";
    case InitialKind::small_amplitude: return "small_amplitude";
    case InitialKind::file: return "file";
  }
  return "?";
}

InitialKind initial_from(const std::string& s) {
  if (s == "profile") return InitialKind::profile;
  if (s == "small_amplitude") return InitialKind::small_amplitude;
  if (s == "file") return InitialKind::file;
  throw ConfigError("initial: unknown kind '" + s + "' (profile, small_amplitude, file)");
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Reads typed fields out of one JSON object and rejects unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Reader() = default;

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("");
        out = v.get<T>();
      } else {
        out = v.get<T>();
      }
    } catch (const std::exception&) {
      throw ConfigError(field(key) + ": wrong type");
    }
  }
  // Doubles where null means +infinity.
  void get_inf(const char* key, double& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    if (v.is_null()) {
      out = std::numeric_limits<double>::infinity();
    } else if (v.is_number()) {
      out = v.get<double>();
    } else {
      throw ConfigError(field(key) + ": expected a number or null");
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json& sub(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key().c_str()) + ": unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"n", c.n}, {"L_dom", c.half_width}};
  j["initial"] = to_string(c.initial);
  j["data_file"] = c.data_file;
  j["data"] = {{"epsilon", c.data.epsilon},         {"M", c.data.M},
               {"cutoff_inner", c.data.cutoff_inner}, {"cutoff_outer", c.data.cutoff_outer},
               {"kappa0", c.data.kappa0},           {"perturbation", c.data.perturbation},
               {"seed", c.data.seed}};
  j["t0"] = c.t0;
  j["mode"] = to_string(c.mode);
  j["step"] = {{"cfl", c.step.cfl},
               {"slope_factor", c.step.slope_factor},
               {"m_stop", finite_or_null(c.step.m_stop)},
               {"resolution_guard", c.step.resolution_guard},
               {"max_dt", c.step.max_dt},
               {"max_steps", c.step.max_steps},
               {"t_end", finite_or_null(c.step.t_end)},
               {"snapshot_ratio", c.step.snapshot_ratio}};
  j["frames"] = {{"per_side", c.frames.per_side},
                 {"x_min", c.frames.x_min},
                 {"window", c.frames.window},
                 {"min_scale_cells", c.frames.min_scale_cells}};
  j["bootstrap"] = {{"M", c.bootstrap.M}, {"high_derivative_gate", c.bootstrap.high_derivative_gate}};
  j["output"] = c.output;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "");
  r.get("name", c.name);
  if (r.has("grid")) {
    Reader g(r.sub("grid"), "grid");
    g.get("n", c.n);
    g.get("L_dom", c.half_width);
    g.finish();
  }
  if (r.has("initial")) {
    std::string k;
    r.get("initial", k);
    c.initial = initial_from(k);
  }
  r.get("data_file", c.data_file);
  if (r.has("data")) {
    Reader d(r.sub("data"), "data");
    d.get("epsilon", c.data.epsilon);
    d.get("M", c.data.M);
    d.get("cutoff_inner", c.data.cutoff_inner);
    d.get("cutoff_outer", c.data.cutoff_outer);
    d.get("kappa0", c.data.kappa0);
    d.get("perturbation", c.data.perturbation);
    d.get("seed", c.data.seed);
    d.finish();
  }
  c.t0 = c.initial == InitialKind::profile ? -c.data.epsilon : 0.0;
  r.get("t0", c.t0);
  if (r.has("mode")) {
    std::string m;
    r.get("mode", m);
    try {
      c.mode = parse_mode(m);
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("mode: ") + e.what());
    }
  }
  if (r.has("step")) {
    Reader s(r.sub("step"), "step");
    s.get("cfl", c.step.cfl);
    s.get("slope_factor", c.step.slope_factor);
    s.get_inf("m_stop", c.step.m_stop);
    s.get("resolution_guard", c.step.resolution_guard);
    s.get("max_dt", c.step.max_dt);
    s.get("max_steps", c.step.max_steps);
    s.get_inf("t_end", c.step.t_end);
    s.get("snapshot_ratio", c.step.snapshot_ratio);
    s.finish();
  }
  if (r.has("frames")) {
    Reader f(r.sub("frames"), "frames");
    f.get("per_side", c.frames.per_side);
    f.get("x_min", c.frames.x_min);
    f.get("window", c.frames.window);
    f.get("min_scale_cells", c.frames.min_scale_cells);
    f.finish();
  }
  c.bootstrap.M = c.data.M;
  if (r.has("bootstrap")) {
    Reader b(r.sub("bootstrap"), "bootstrap");
    b.get("M", c.bootstrap.M);
    b.get("high_derivative_gate", c.bootstrap.high_derivative_gate);
    b.finish();
  }
  r.get("output", c.output);
  r.finish();
  c.bootstrap.epsilon = c.data.epsilon;
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string(field) + ": " + e.what());
    }
  };
  wrap("grid", [&] { SpectralGrid(c.n, c.half_width); });
  if (c.initial == InitialKind::profile) {
    wrap("data", [&] { validate(c.data, c.half_width); });
    const double need = std::pow(c.data.epsilon, 1.5) / 8.0;
    if (2.0 * c.half_width / static_cast<double>(c.n) > need)
      throw ConfigError("grid.n: dx = 2 L_dom / n must be <= epsilon^{3/2}/8 = " + std::to_string(need));
  }
  if (c.initial == InitialKind::small_amplitude && !(c.data.epsilon > 0.0))
    throw ConfigError("data.epsilon: amplitude must be positive");
  if (c.initial == InitialKind::file && c.data_file.empty())
    throw ConfigError("data_file: required when initial is 'file'");
  if (!std::isfinite(c.t0)) throw ConfigError("t0: must be finite");
  wrap("step", [&] { validate(c.step); });
  if (c.frames.per_side < 2 || !(c.frames.x_min > 0.0) || !(c.frames.window > 0.0) ||
      !(c.frames.min_scale_cells > 0.0))
    throw ConfigError("frames: per_side >= 2 and positive x_min, window, min_scale_cells required");
  if (c.initial == InitialKind::profile) wrap("bootstrap", [&] { validate(c.bootstrap); });
  if (c.output.empty()) throw ConfigError("output: must not be empty");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << to_json(c).dump(2) << "\n";
}

std::vector<std::string> preset_names() {
  return {"full", "burgers-oracle", "linear-oracle", "bootstrap", "small-amplitude"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.output = "runs/" + name;
  if (name == "full") {
    // Defaults are the small-box blowup geometry.
  } else if (name == "burgers-oracle") {
    c.mode = Mode::burgers_only;
  } else if (name == "linear-oracle") {
    c.n = 4096;
    c.half_width = 8.0;
    c.data = DataSpec{0.1, 50.0, 0.5, 1.0, 0.0, 0.0, 1};
    c.t0 = 0.0;
    c.mode = Mode::linear_only;
    c.step.t_end = 2.0 * std::numbers::pi;
  } else if (name == "bootstrap") {
    // Plateau reaching |x| = 1/2 so that the middle range |x - ξ| <= 1/2
    // sees the profile rather than the cutoff.
    c.half_width = 2.4;
    c.data.cutoff_inner = 0.5;
    c.data.cutoff_outer = 0.6;
  } else if (name == "small-amplitude") {
    c.n = 2048;
    c.half_width = std::numbers::pi;
    c.initial = InitialKind::small_amplitude;
    c.data.epsilon = 0.5;
    c.t0 = 0.0;
    c.step.max_dt = 1e-2;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.bootstrap.M = c.data.M;
  c.bootstrap.epsilon = c.data.epsilon;
  return c;
}

}  // namespace bhblow
