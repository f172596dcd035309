#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mildflow/trajectory.hpp"

namespace mildflow {

/// Parabolic zoom parameters. t_k is an absolute time of the source
/// trajectory; x_k is a point of the source domain.
struct RescaleParams {
  std::vector<double> x_k;
  double t_k = 0.0;
  double M = 1.0;
  /// Length of the zoomed window in rescaled time; unset means up to the
  /// end of the source trajectory.
  std::optional<double> duration;
};

struct ZoomResult {
  Trajectory trajectory;
  /// M is not an integer: the zoomed torus is not a union of source periods.
  bool aperiodic = false;
};

/// u_k(x, t) = u(x_k + x/M, t_k + t/M^2) / M and d_k(x, t) = d(x_k + x/M, t_k + t/M^2),
/// written on the torus of period M*L with the same mode count (exact for
/// every resolved mode). Windows cut by t_k or the duration are resampled on
/// Chebyshev-Lobatto nodes through the source polynomial.
ZoomResult zoom(const Trajectory& traj, const RescaleParams& p);

/// Parameters of zoom(zoom(T, first), second) as a single zoom.
RescaleParams compose(const RescaleParams& first, const RescaleParams& second);

/// Largest mild-equation mismatch over all windows: each window is pushed
/// through the Duhamel map from its own start state.
double residual_check(const Trajectory& traj);

/// Collocation point maximising |u| + |grad d| at the final node.
std::vector<double> argmax_point(const Trajectory& traj);

/// Image of a norm series (t, ||u||_inf + ||grad d||_inf) under the zoom.
std::vector<std::pair<double, double>> rescale_norm_series(
    std::span<const std::pair<double, double>> series, const RescaleParams& p);

/// Image of a blow-up time under the zoom.
double rescale_time(double t, const RescaleParams& p);

}  // namespace mildflow
