#include "mildflow/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mildflow/error.hpp"
#include "mildflow/snapshot.hpp"

namespace mildflow {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::json;

// JSON has no infinities or NaN; store them as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json to_json(const SolverConstants& c) {
  return {{"C_star", c.C_star}, {"K_star", number(c.K_star)}, {"T_star", number(c.T_star)},
          {"T0", number(c.T0)}, {"sup_u0", c.sup_u0},        {"sobolev_d0", c.sobolev_d0},
          {"sup_grad_d0", c.sup_grad_d0}};
}

json to_json(const PicardRecord& r) {
  return {{"iterations", r.iterations},
          {"distances", numbers(r.distances)},
          {"ratios", numbers(r.ratios)},
          {"contraction_ratio", number(r.contraction_ratio)},
          {"converged", r.converged},
          {"quadrature_error", number(r.quadrature_error)},
          {"exceeded_T_star", r.exceeded_T_star},
          {"window_start", r.window_start},
          {"window_length", r.window_length}};
}

json to_json(const WindowReport& w) {
  return {{"index", w.index},
          {"t_start", w.t_start},
          {"length", w.length},
          {"retries", w.retries},
          {"constants", to_json(w.constants)},
          {"picard", to_json(w.record)},
          {"sup_u_end", w.sup_u_end},
          {"sup_grad_d_end", w.sup_grad_d_end}};
}

json to_json(const std::vector<ModulusSample>& eta) {
  json out = json::array();
  for (const auto& s : eta) out.push_back({{"r", s.r}, {"eta", s.eta}});
  return out;
}

json to_json(const std::vector<ModulusTable>& tables) {
  json out = json::array();
  for (const auto& t : tables) out.push_back({{"t", t.t}, {"eta", to_json(t.eta)}});
  return out;
}

void write_text(const fs::path& path, const std::string& text) { write_file_atomic(path, text); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("missing file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string node_name(std::size_t i, const char* field) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "node_%05zu_%s.mfld", i, field);
  return buf;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

Scenario scenario_from_manifest(const fs::path& run_dir) {
  const auto manifest = read_json(run_dir / "manifest.json");
  if (!manifest.contains("scenario")) throw FormatError("manifest.json: no scenario section");
  return parse_scenario(manifest.at("scenario").dump());
}

void write_report(const fs::path& dir, const Trajectory& traj, const DiagnosticsConfig& cfg,
                  DiagnosticsReport* out) {
  auto report = build_report(traj, cfg);
  write_text(dir / "norms.csv", norms_csv(report.norms));
  write_text(dir / "diagnostics.json", report_json(report));
  if (out) *out = std::move(report);
}

}  // namespace

std::string norms_csv(const std::vector<NormSample>& norms) {
  std::string out = "t,sup_u,sup_grad_d,dev_unit,div_res\n";
  char buf[160];
  for (const auto& n : norms) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", n.t, n.sup_u, n.sup_grad_d,
                  n.dev_unit, n.div_res);
    out += buf;
  }
  return out;
}

std::string report_json(const DiagnosticsReport& r) {
  json j;
  json series = json::object();
  for (const char* key : {"t", "sup_u", "sup_grad_d", "dev_unit", "div_res"}) series[key] = json::array();
  for (const auto& n : r.norms) {
    series["t"].push_back(n.t);
    series["sup_u"].push_back(n.sup_u);
    series["sup_grad_d"].push_back(n.sup_grad_d);
    series["dev_unit"].push_back(n.dev_unit);
    series["div_res"].push_back(n.div_res);
  }
  j["series"] = series;
  json rows = json::array();
  for (const auto& row : r.smoothing.rows) {
    rows.push_back({{"t", row.t}, {"velocity", row.velocity_product}, {"director", row.director_product}});
  }
  j["smoothing"] = {{"order", r.smoothing.order},
                    {"rows", rows},
                    {"max_velocity_product", r.smoothing.max_velocity_product},
                    {"max_director_product", r.smoothing.max_director_product},
                    {"growth_flag", r.smoothing.growth_flag}};
  j["type_one"] = {{"t_blow", r.t_blow},
                   {"C_est", r.type_one.C_est},
                   {"classification", std::string(to_string(r.type_one.classification))},
                   {"products", r.type_one.products}};
  j["eta_director"] = {{"tables", to_json(r.eta_director)},
                       {"running_max", to_json(r.eta_director_running_max)}};
  j["vorticity"] = {{"max_vorticity", r.max_vorticity}, {"mask_fraction", r.mask_fraction}};
  if (r.vorticity_applicable) {
    j["eta_direction"] = {{"tables", to_json(r.eta_direction)},
                          {"running_max", to_json(r.eta_direction_running_max)}};
    j["direction_gradient_integral"] = number(r.direction_gradient_integral.value_or(0.0));
  } else {
    j["eta_direction"] = "not applicable";
    j["direction_gradient_integral"] = "not applicable";
  }
  return j.dump(2) + "\n";
}

void save_trajectory(const Trajectory& traj, const fs::path& dir) {
  fs::create_directories(dir);
  json meta;
  const auto& grid = traj.grid();
  meta["dimension"] = grid.dimension();
  meta["modes_per_axis"] = grid.modes_per_axis();
  meta["period"] = grid.period();
  meta["times"] = traj.times();
  json starts = json::array();
  for (std::size_t w = 0; w < traj.window_count(); ++w) starts.push_back(traj.window_start(w));
  meta["window_starts"] = starts;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    write_snapshot(traj.state(i).u, dir / node_name(i, "u"));
    write_snapshot(traj.state(i).d, dir / node_name(i, "d"));
  }
  write_text(dir / "trajectory.json", meta.dump(2) + "\n");
}

Trajectory load_trajectory(const fs::path& dir) {
  const auto meta = read_json(dir / "trajectory.json");
  const double period = meta.at("period").get<double>();
  const auto times = meta.at("times").get<std::vector<double>>();
  auto starts = meta.at("window_starts").get<std::vector<std::size_t>>();
  if (times.empty() || starts.empty() || starts.front() != 0) {
    throw FormatError("trajectory.json: inconsistent window layout");
  }
  std::vector<StatePair> states;
  for (std::size_t i = 0; i < times.size(); ++i) {
    states.emplace_back(read_snapshot(dir / node_name(i, "u"), period).with_role(FieldRole::velocity),
                        read_snapshot(dir / node_name(i, "d"), period).with_role(FieldRole::director),
                        times[i]);
  }
  starts.push_back(times.size() - 1);
  auto slice = [&](std::size_t w) {
    const std::size_t hi = std::max(starts[w + 1], starts[w]);
    return std::vector<StatePair>(states.begin() + starts[w], states.begin() + hi + 1);
  };
  Trajectory traj(slice(0));
  for (std::size_t w = 1; w + 1 < starts.size(); ++w) traj.append_window(Trajectory(slice(w)));
  return traj;
}

RunOutcome run_scenario(const Scenario& scenario, const std::optional<fs::path>& out) {
  RunOutcome outcome;
  outcome.directory = out.value_or(scenario.output.directory);
  const auto& dir = outcome.directory;
  fs::create_directories(dir);

  const auto init = initial_state(scenario);
  json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = config_hash(scenario.canonical);
  manifest["seed"] = scenario.seed;
  manifest["scenario"] = json::parse(scenario.canonical);
  manifest["constants"] =
      to_json(solver_constants(init.u, init.d, scenario.solver.C_star, scenario.solver.T_max));
  manifest["constants"]["T_max"] = scenario.solver.T_max;

  std::optional<MarchResult> result;
  json failure = nullptr;
  try {
    result = march(init.u, init.d, scenario.time_T, scenario.solver);
  } catch (const MarchFailure& e) {
    result = e.partial();
    result->blowup_flagged = true;
    failure = {{"window", e.window()}, {"t_start", e.t_start()}, {"message", e.what()},
               {"picard", to_json(e.record())}};
  }

  json windows = json::array();
  for (const auto& w : result->windows) windows.push_back(to_json(w));
  manifest["windows"] = windows;
  manifest["blowup_flagged"] = result->blowup_flagged;
  manifest["stop_reason"] = result->stop_reason;
  manifest["failure"] = failure;
  manifest["t_reached"] = result->trajectory.t_end();

  const bool complete = failure.is_null() && !result->blowup_flagged;
  outcome.blowup_flagged = result->blowup_flagged;
  outcome.status = complete ? exit_ok : exit_solver_failure;
  outcome.message = complete ? "completed" : (failure.is_null() ? result->stop_reason : failure["message"].get<std::string>());
  manifest["status"] = complete ? "completed" : "failed";

  const auto& traj = result->trajectory;
  if (!scenario.output.snapshot_times.empty()) {
    fs::create_directories(dir / "snapshots");
    for (double t : scenario.output.snapshot_times) {
      if (t > traj.t_end()) continue;
      const auto s = traj.interpolate(t);
      write_snapshot(s.u, dir / "snapshots" / ("u_t" + time_tag(t) + ".mfld"));
      write_snapshot(s.d, dir / "snapshots" / ("d_t" + time_tag(t) + ".mfld"));
    }
  }
  if (scenario.output.trajectory) save_trajectory(traj, dir / "trajectory");
  write_report(dir, traj, scenario.diagnostics_config(), nullptr);
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

DiagnosticsReport diagnose_run(const fs::path& run_dir, const DiagnoseOverrides& overrides) {
  auto scenario = scenario_from_manifest(run_dir);
  if (overrides.sigma) scenario.diagnostics.sigma_vorticity = *overrides.sigma;
  if (overrides.a) scenario.diagnostics.exponent_a = *overrides.a;
  if (overrides.b) scenario.diagnostics.exponent_b = *overrides.b;
  const auto cfg = scenario.diagnostics_config();
  const auto traj = load_trajectory(run_dir / "trajectory");
  DiagnosticsReport report;
  write_report(run_dir, traj, cfg, &report);
  return report;
}

RescaleOutcome rescale_run(const fs::path& run_dir, RescaleParams params) {
  const auto traj = load_trajectory(run_dir / "trajectory");
  if (params.x_k.empty()) params.x_k = argmax_point(traj);
  const auto zoomed = zoom(traj, params);

  RescaleOutcome outcome;
  outcome.params = params;
  outcome.aperiodic = zoomed.aperiodic;
  outcome.source_residual = residual_check(traj);
  outcome.zoomed_residual = residual_check(zoomed.trajectory);
  outcome.directory = run_dir / ("zoom_M" + time_tag(params.M));
  save_trajectory(zoomed.trajectory, outcome.directory / "trajectory");
  write_text(outcome.directory / "norms.csv", norms_csv(norm_series(zoomed.trajectory)));

  json j;
  j["M"] = params.M;
  j["x_k"] = params.x_k;
  j["t_k"] = params.t_k;
  j["aperiodic"] = zoomed.aperiodic;
  if (zoomed.aperiodic) j["note"] = "aperiodic window - valid locally";
  j["period"] = zoomed.trajectory.grid().period();
  j["source_residual"] = outcome.source_residual;
  j["zoomed_residual"] = outcome.zoomed_residual;
  write_text(outcome.directory / "rescale.json", j.dump(2) + "\n");
  return outcome;
}

}  // namespace mildflow
