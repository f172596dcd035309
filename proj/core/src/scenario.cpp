#include "mildflow/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mildflow/error.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw InvalidArgument(key + ": " + what);
}

// Key-checked view of one JSON object; unknown keys are rejected so typos in
// scenario files do not silently fall back to defaults.
class Section {
 public:
  Section(const json& node, std::string prefix) : node_(node), prefix_(std::move(prefix)) {
    if (!node_.is_object()) fail(name(""), "expected an object");
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(name(key), "has the wrong type");
    }
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!node_.contains(key) || node_.at(key).is_null()) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(name(key), "has the wrong type");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(node_.contains(key) ? node_.at(key) : empty, name(key));
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) fail(name(it.key()), "unknown key");
    }
  }

  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "scenario" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& node_;
  std::string prefix_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

DealiasMode parse_dealias(const std::string& s, const std::string& key) {
  if (s == "two_thirds") return DealiasMode::two_thirds;
  if (s == "refined_cubic") return DealiasMode::refined_cubic;
  fail(key, "expected two_thirds or refined_cubic");
}

std::string dealias_name(DealiasMode m) {
  return m == DealiasMode::two_thirds ? "two_thirds" : "refined_cubic";
}

json canonical_json(const Scenario& s) {
  json j;
  j["grid"] = {{"dimension", s.grid.dimension},
               {"modes_per_axis", s.grid.modes_per_axis},
               {"period_length", s.grid.period_length}};
  const auto& v = s.velocity;
  j["initial_data"]["velocity"] = {{"family", v.family},       {"amplitude", v.amplitude},
                                   {"wavevector", v.wavevector}, {"polarization", v.polarization},
                                   {"band_min", v.band_min},   {"band_max", v.band_max},
                                   {"abc", v.abc},             {"path", v.path.string()}};
  const auto& d = s.director;
  j["initial_data"]["director"] = {{"family", d.family},         {"value", d.value},
                                   {"amplitude", d.amplitude},   {"wavevector", d.wavevector},
                                   {"band_min", d.band_min},     {"band_max", d.band_max},
                                   {"path", d.path.string()}};
  j["initial_data"]["unit_director"] = s.unit_director;
  const auto& c = s.solver;
  j["solver"] = {{"time_T", s.time_T},
                 {"tolerance", c.tol},
                 {"max_iter", c.max_iter},
                 {"quadrature_nodes", c.quadrature_nodes},
                 {"C_star", c.C_star},
                 {"safety_factor", c.safety},
                 {"min_window_time", c.min_window},
                 {"max_window_time", std::isfinite(c.max_window) ? json(c.max_window) : json(nullptr)},
                 {"max_retries", c.max_retries},
                 {"renormalize_director", c.renormalize},
                 {"dealias_mode", dealias_name(c.nonlinear.dealias)}};
  const auto& g = s.diagnostics;
  j["diagnostics"] = {{"sigma_vorticity", g.sigma_vorticity},
                      {"exponent_a", g.exponent_a},
                      {"exponent_b", g.exponent_b},
                      {"time_blowup", g.time_blowup ? json(*g.time_blowup) : json(nullptr)},
                      {"eta_bins", g.eta_bins},
                      {"smoothing_order", g.smoothing_order}};
  j["output"] = {{"directory", s.output.directory.string()},
                 {"snapshot_times", s.output.snapshot_times},
                 {"trajectory", s.output.trajectory}};
  j["seed"] = s.seed;
  return j;
}

void validate(const Scenario& s) {
  try {
    mildflow::make_grid(s.grid.dimension, s.grid.modes_per_axis, s.grid.period_length);
  } catch (const InvalidArgument& e) {
    fail("grid", e.what());
  }
  if (!(s.grid.period_length > 0.0)) fail("grid.period_length", "must be positive");
  if (!(s.time_T > 0.0)) fail("solver.time_T", "must be positive");
  const auto& c = s.solver;
  if (!(c.tol > 0.0)) fail("solver.tolerance", "must be positive");
  if (c.max_iter < 1) fail("solver.max_iter", "must be at least 1");
  if (c.quadrature_nodes < 2 || c.quadrature_nodes > 24) fail("solver.quadrature_nodes", "must be in [2, 24]");
  if (!(c.C_star > 0.0)) fail("solver.C_star", "must be positive");
  if (!(c.safety > 0.0 && c.safety <= 1.0)) fail("solver.safety_factor", "must be in (0, 1]");
  if (!(c.min_window > 0.0)) fail("solver.min_window_time", "must be positive");
  if (!(c.max_window > 0.0)) fail("solver.max_window_time", "must be positive");
  if (c.max_retries < 0) fail("solver.max_retries", "must be nonnegative");
  const auto& g = s.diagnostics;
  try {
    BlowupWindowConfig(g.sigma_vorticity, g.exponent_a, g.exponent_b, g.time_blowup);
  } catch (const InvalidArgument& e) {
    fail("diagnostics", e.what());
  }
  if (g.eta_bins < 1) fail("diagnostics.eta_bins", "must be at least 1");
  if (g.smoothing_order < 1 || 3 * (g.smoothing_order + 1) > s.grid.modes_per_axis) {
    fail("diagnostics.smoothing_order", "must satisfy 1 <= l <= N/3 - 1");
  }
  for (double t : s.output.snapshot_times) {
    if (!(t >= 0.0 && t <= s.time_T)) fail("output.snapshot_times", "times must lie in [0, time_T]");
  }
  if (s.output.directory.empty()) fail("output.directory", "must not be empty");
}

}  // namespace

SpectralGrid Scenario::make_grid() const {
  return mildflow::make_grid(grid.dimension, grid.modes_per_axis, grid.period_length);
}

DiagnosticsConfig Scenario::diagnostics_config() const {
  DiagnosticsConfig cfg;
  cfg.window = BlowupWindowConfig(diagnostics.sigma_vorticity, diagnostics.exponent_a,
                                  diagnostics.exponent_b, diagnostics.time_blowup);
  cfg.smoothing_order = diagnostics.smoothing_order;
  cfg.modulus.bins = diagnostics.eta_bins;
  cfg.modulus.seed = seed;
  return cfg;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("scenario: parse error: ") + e.what());
  }
  Scenario s;
  Section top(root, "");

  auto grid = top.child("grid");
  grid.get("dimension", s.grid.dimension);
  grid.get("modes_per_axis", s.grid.modes_per_axis);
  grid.get("period_length", s.grid.period_length);
  grid.finish();

  auto init = top.child("initial_data");
  {
    auto v = init.child("velocity");
    std::string path;
    v.get("family", s.velocity.family);
    v.get("amplitude", s.velocity.amplitude);
    v.get("wavevector", s.velocity.wavevector);
    v.get("polarization", s.velocity.polarization);
    v.get("band_min", s.velocity.band_min);
    v.get("band_max", s.velocity.band_max);
    v.get("abc", s.velocity.abc);
    v.get("path", path);
    v.finish();
    if (!path.empty()) s.velocity.path = resolve(base, path);
    if (s.velocity.family == "snapshot" && path.empty()) fail(v.name("path"), "required for snapshot data");
  }
  {
    auto d = init.child("director");
    std::string path;
    d.get("family", s.director.family);
    d.get("value", s.director.value);
    d.get("amplitude", s.director.amplitude);
    d.get("wavevector", s.director.wavevector);
    d.get("band_min", s.director.band_min);
    d.get("band_max", s.director.band_max);
    d.get("path", path);
    d.finish();
    if (!path.empty()) s.director.path = resolve(base, path);
    if (s.director.family == "snapshot" && path.empty()) fail(d.name("path"), "required for snapshot data");
  }
  init.get("unit_director", s.unit_director);
  init.finish();

  auto solver = top.child("solver");
  std::string dealias = "refined_cubic";
  std::optional<double> max_window;
  solver.get("time_T", s.time_T);
  solver.get("tolerance", s.solver.tol);
  solver.get("max_iter", s.solver.max_iter);
  solver.get("quadrature_nodes", s.solver.quadrature_nodes);
  solver.get("C_star", s.solver.C_star);
  solver.get("safety_factor", s.solver.safety);
  solver.get("min_window_time", s.solver.min_window);
  solver.get("max_window_time", max_window);
  solver.get("max_retries", s.solver.max_retries);
  solver.get("renormalize_director", s.solver.renormalize);
  solver.get("dealias_mode", dealias);
  solver.finish();
  if (max_window) s.solver.max_window = *max_window;
  s.solver.nonlinear.dealias = parse_dealias(dealias, "solver.dealias_mode");

  auto diag = top.child("diagnostics");
  diag.get("sigma_vorticity", s.diagnostics.sigma_vorticity);
  diag.get("exponent_a", s.diagnostics.exponent_a);
  diag.get("exponent_b", s.diagnostics.exponent_b);
  diag.get("time_blowup", s.diagnostics.time_blowup);
  diag.get("eta_bins", s.diagnostics.eta_bins);
  diag.get("smoothing_order", s.diagnostics.smoothing_order);
  diag.finish();

  auto out = top.child("output");
  std::string dir = "run";
  out.get("directory", dir);
  out.get("snapshot_times", s.output.snapshot_times);
  out.get("trajectory", s.output.trajectory);
  out.finish();
  s.output.directory = resolve(base, dir);

  top.get("seed", s.seed);
  top.finish();

  validate(s);
  s.canonical = canonical_json(s).dump(2);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("scenario file not found: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.parent_path());
}

StatePair initial_state(const Scenario& scenario) {
  const auto grid = scenario.make_grid();
  auto u = make_velocity(grid, scenario.velocity, scenario.seed);
  auto d = make_director(grid, scenario.director, scenario.seed);
  if (scenario.unit_director) {
    const double dev = unit_length_deviation(d);
    if (dev > 1e-8) {
      std::ostringstream os;
      os << "initial_data.director: unit_director claimed but | |d0| - 1 | = " << dev;
      throw InvalidArgument(os.str());
    }
  }
  if (divergence_residual(u) > 1e-10 * std::max(1.0, sup_norm(u))) {
    throw InvalidArgument("initial_data.velocity: field is not divergence-free");
  }
  return StatePair(std::move(u), std::move(d), 0.0);
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mildflow
