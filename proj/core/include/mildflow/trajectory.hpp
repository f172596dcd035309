#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mildflow/field.hpp"

namespace mildflow {

/// Time-indexed samples of (u, d), organised as consecutive windows.
///
/// Each window is represented by its node states; inside a window the
/// states are interpolated by the polynomial through those nodes. Adjacent
/// windows share their boundary node, so window w covers node indices
/// [start(w), start(w + 1)] and the last window ends at the final node.
class Trajectory {
 public:
  /// Single window from explicit node states (times taken from the states).
  explicit Trajectory(std::vector<StatePair> states);

  /// Window of `nodes` Chebyshev-Lobatto times on [t0, t1] holding the same state.
  static Trajectory constant(const StatePair& state, double t0, double t1, int nodes);

  const SpectralGrid& grid() const { return states_.front().u.grid(); }
  std::size_t size() const noexcept { return states_.size(); }
  double t_start() const { return states_.front().t; }
  double t_end() const { return states_.back().t; }
  std::vector<double> times() const;
  const std::vector<StatePair>& states() const noexcept { return states_; }
  const StatePair& state(std::size_t i) const { return states_.at(i); }
  const StatePair& front() const { return states_.front(); }
  const StatePair& back() const { return states_.back(); }

  std::size_t window_count() const noexcept { return window_starts_.size(); }
  std::size_t window_start(std::size_t w) const { return window_starts_.at(w); }
  std::size_t window_end(std::size_t w) const;
  /// Node states of window w, boundary nodes included.
  std::span<const StatePair> window(std::size_t w) const;
  /// Standalone single-window trajectory for window w.
  Trajectory window_trajectory(std::size_t w) const;

  /// Appends a window whose first node coincides in time with back().
  /// The shared node keeps this trajectory's state.
  void append_window(const Trajectory& next);

  /// Replaces the last node's state (used when restarting from an adjusted state).
  void replace_back(StatePair state);

  /// Polynomial interpolation of the state at time t inside the containing window.
  StatePair interpolate(double t) const;

 private:
  Trajectory() = default;
  void validate() const;

  std::vector<StatePair> states_;
  std::vector<std::size_t> window_starts_;
};

}  // namespace mildflow
