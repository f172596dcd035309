#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mildflow/error.hpp"
#include "mildflow/exponential_weights.hpp"
#include "mildflow/field.hpp"
#include "mildflow/nonlinear.hpp"
#include "mildflow/trajectory.hpp"

namespace mildflow {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 50;
  /// Chebyshev-Lobatto nodes per window (quadrature and output).
  int quadrature_nodes = 8;
  double C_star = 1.0;
  /// Window length as a fraction of the existence-time estimate.
  double safety = 0.5;
  /// Marching stops with a blow-up flag when a window would be shorter.
  double min_window = 1e-8;
  double max_window = std::numeric_limits<double>::infinity();
  /// Existence time returned for degenerate (zero) data.
  double T_max = 1.0;
  /// Window halvings attempted after a Picard failure before giving up.
  int max_retries = 6;
  /// Iterate distance treated as divergence.
  double divergence_threshold = 1e8;
  bool renormalize = false;
  NonlinearOptions nonlinear{};
};

/// Constants of the contraction argument for given data (iteration index k = 0).
struct SolverConstants {
  double C_star = 1.0;
  double K_star = 0.0;
  double T_star = 0.0;
  double T0 = 0.0;
  /// Inputs, so the constants can be recomputed from a manifest.
  double sup_u0 = 0.0;
  double sobolev_d0 = 0.0;  ///< ||d0||_{W^{1,inf}}
  double sup_grad_d0 = 0.0;
};

SolverConstants solver_constants(const VectorField& u0, const VectorField& d0, double C_star,
                                 double T_max = 1.0);

/// (1 / (4 C* (||u0||_inf + ||grad d0||_inf)))^2, or T_max for zero data.
double existence_time_estimate(const VectorField& u0, const VectorField& d0, double C_star,
                               double T_max = 1.0);

struct PicardRecord {
  int iterations = 0;
  /// distances[m-1] = || X_m - X_{m-1} ||
  std::vector<double> distances;
  /// Ratios distances[m] / distances[m-1] above the rounding floor.
  std::vector<double> ratios;
  double contraction_ratio = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  /// Interpolation error model of the time quadrature (sup + W^{1,inf} units).
  double quadrature_error = 0.0;
  bool exceeded_T_star = false;
  double window_start = 0.0;
  double window_length = 0.0;
};

class PicardFailure : public Error {
 public:
  enum class Kind { non_convergence, divergence };
  PicardFailure(Kind kind, PicardRecord record, const std::string& what)
      : Error(what), kind_(kind), record_(std::move(record)) {}
  Kind kind() const noexcept { return kind_; }
  const PicardRecord& record() const noexcept { return record_; }

 private:
  Kind kind_;
  PicardRecord record_;
};

struct DuhamelOptions {
  bool include_nonlinear = true;
  NonlinearOptions nonlinear{};
};

/// One application of the Duhamel map S to a single-window trajectory.
/// The output shares the input's node times.
Trajectory duhamel_map(const VectorField& u0, const VectorField& d0, const Trajectory& input,
                       const DuhamelOptions& options = {});

/// Same, reusing a weight table built for the input's node offsets.
Trajectory duhamel_map(const VectorField& u0, const VectorField& d0, const Trajectory& input,
                       const DuhamelWeights& weights, const DuhamelOptions& options = {});

/// Convergence metric: max over nodes of sup|du| + ||dd||_{W^{1,inf}}.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

struct PicardResult {
  Trajectory trajectory;
  PicardRecord record;
};

/// Picard iteration of S on [t0, t0 + T] from the free evolution.
PicardResult picard_solve(const VectorField& u0, const VectorField& d0, double T,
                          const SolverConfig& cfg, double t0 = 0.0);

struct WindowReport {
  std::size_t index = 0;
  double t_start = 0.0;
  double length = 0.0;
  int retries = 0;
  SolverConstants constants;
  PicardRecord record;
  double sup_u_end = 0.0;
  double sup_grad_d_end = 0.0;
};

struct MarchResult {
  Trajectory trajectory;
  std::vector<WindowReport> windows;
  bool blowup_flagged = false;
  std::string stop_reason;
};

class MarchFailure : public Error {
 public:
  MarchFailure(std::size_t window, double t_start, PicardRecord record, MarchResult partial,
               const std::string& what)
      : Error(what), window_(window), t_start_(t_start), record_(std::move(record)),
        partial_(std::move(partial)) {}
  std::size_t window() const noexcept { return window_; }
  double t_start() const noexcept { return t_start_; }
  const PicardRecord& record() const noexcept { return record_; }
  const MarchResult& partial() const noexcept { return partial_; }

 private:
  std::size_t window_;
  double t_start_;
  PicardRecord record_;
  MarchResult partial_;
};

/// Concatenated Picard windows over [0, T_total], each of length
/// min(safety * T0(current state), remaining, max_window).
MarchResult march(const VectorField& u0, const VectorField& d0, double T_total,
                  const SolverConfig& cfg);

/// d / |d| pointwise on the collocation grid.
VectorField renormalize_director(const VectorField& d);

}  // namespace mildflow
