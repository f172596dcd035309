#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mildflow/diagnostics.hpp"
#include "mildflow/rescale.hpp"
#include "mildflow/scenario.hpp"

namespace mildflow {

inline constexpr const char* kVersion = "0.1.0";

/// Exit statuses of the run-level entry points.
enum ExitStatus : int { exit_ok = 0, exit_input_error = 1, exit_solver_failure = 2 };

struct RunOutcome {
  int status = exit_ok;
  std::filesystem::path directory;
  bool blowup_flagged = false;
  std::string message;
};

/// Solves the scenario and writes, under the output directory:
///   norms.csv, diagnostics.json, manifest.json, snapshots/ and trajectory/.
RunOutcome run_scenario(const Scenario& scenario,
                        const std::optional<std::filesystem::path>& out = std::nullopt);

struct DiagnoseOverrides {
  std::optional<double> sigma;
  std::optional<double> a;
  std::optional<double> b;
};

/// Recomputes diagnostics from a stored trajectory and rewrites diagnostics.json.
DiagnosticsReport diagnose_run(const std::filesystem::path& run_dir, const DiagnoseOverrides& overrides = {});

struct RescaleOutcome {
  std::filesystem::path directory;
  RescaleParams params;
  bool aperiodic = false;
  double source_residual = 0.0;
  double zoomed_residual = 0.0;
};

/// Zooms a stored trajectory into run_dir/zoom_M<M>/. An empty x_k selects
/// the argmax of |u| + |grad d| at the final node.
RescaleOutcome rescale_run(const std::filesystem::path& run_dir, RescaleParams params);

/// trajectory/ layout: trajectory.json (times, window starts, period) plus
/// one MFLD file per node and field.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
Trajectory load_trajectory(const std::filesystem::path& dir);

/// Norm series as CSV (t, sup_u, sup_grad_d, dev_unit, div_res), %.17g.
std::string norms_csv(const std::vector<NormSample>& norms);

std::string report_json(const DiagnosticsReport& report);

}  // namespace mildflow
