#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mildflow/diagnostics.hpp"
#include "mildflow/initial_data.hpp"
#include "mildflow/solver.hpp"

namespace mildflow {

struct GridSpec {
  int dimension = 2;
  int modes_per_axis = 64;
  double period_length = 2.0 * std::numbers::pi;
};

struct DiagnosticsSpec {
  double sigma_vorticity = 0.5;
  double exponent_a = 4.0;
  double exponent_b = 6.0;
  std::optional<double> time_blowup;
  int eta_bins = 16;
  int smoothing_order = 1;
};

struct OutputSpec {
  std::filesystem::path directory = "run";
  /// Times at which MFLD snapshots of u and d are written.
  std::vector<double> snapshot_times;
  /// Store every node so diagnose/rescale can run later.
  bool trajectory = true;
};

/// A validated simulation scenario (JSON on disk).
struct Scenario {
  GridSpec grid;
  VelocitySpec velocity;
  DirectorSpec director;
  /// Claims |d0| = 1; enforced to 1e-8 on load.
  bool unit_director = true;
  double time_T = 1.0;
  SolverConfig solver;
  DiagnosticsSpec diagnostics;
  OutputSpec output;
  std::uint64_t seed = 0;
  /// Canonical serialisation, the input of the configuration hash.
  std::string canonical;

  SpectralGrid make_grid() const;
  DiagnosticsConfig diagnostics_config() const;
};

/// Reads and validates a scenario; relative snapshot paths are resolved
/// against the file's directory. Throws NotFound or InvalidArgument with a
/// message naming the offending key.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text,
                        const std::filesystem::path& base = std::filesystem::path());

/// Initial (u0, d0) at t = 0; also checks the unit-director claim.
StatePair initial_state(const Scenario& scenario);

/// 64-bit FNV-1a hash, hex encoded.
std::string config_hash(const std::string& text);

}  // namespace mildflow
