#include "mildflow/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "mildflow/chebyshev.hpp"
#include "mildflow/error.hpp"

namespace mildflow {

namespace {

VectorField combine(std::span<const StatePair> nodes, std::span<const double> coeff, bool velocity) {
  const auto& ref = velocity ? nodes.front().u : nodes.front().d;
  std::vector<VectorField::Spectrum> spectra(ref.components(), VectorField::Spectrum(ref.grid().size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (coeff[j] == 0.0) continue;
    const auto& f = velocity ? nodes[j].u : nodes[j].d;
    for (std::size_t c = 0; c < f.components(); ++c) {
      const auto src = f.spectral(c);
      for (std::size_t i = 0; i < src.size(); ++i) spectra[c][i] += coeff[j] * src[i];
    }
  }
  return VectorField(ref.grid(), std::move(spectra), ref.role());
}

}  // namespace

Trajectory::Trajectory(std::vector<StatePair> states) : states_(std::move(states)) {
  if (states_.empty()) throw InvalidArgument("a trajectory needs at least one node");
  window_starts_ = {0};
  validate();
}

Trajectory Trajectory::constant(const StatePair& state, double t0, double t1, int nodes) {
  std::vector<StatePair> states;
  for (double x : lobatto_nodes(nodes)) states.emplace_back(state.u, state.d, t0 + (t1 - t0) * x);
  states.front().t = t0;
  states.back().t = t1;
  return Trajectory(std::move(states));
}

void Trajectory::validate() const {
  for (std::size_t i = 1; i < states_.size(); ++i) {
    if (!(states_[i].t > states_[i - 1].t)) {
      throw InvalidArgument("trajectory node times must be strictly increasing");
    }
    require_same_grid(states_[i].u, states_.front().u);
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(states_.size());
  for (const auto& s : states_) t.push_back(s.t);
  return t;
}

std::size_t Trajectory::window_end(std::size_t w) const {
  return w + 1 < window_starts_.size() ? window_starts_[w + 1] : states_.size() - 1;
}

std::span<const StatePair> Trajectory::window(std::size_t w) const {
  const std::size_t a = window_start(w);
  const std::size_t b = window_end(w);
  return std::span<const StatePair>(states_).subspan(a, b - a + 1);
}

Trajectory Trajectory::window_trajectory(std::size_t w) const {
  const auto nodes = window(w);
  return Trajectory(std::vector<StatePair>(nodes.begin(), nodes.end()));
}

void Trajectory::append_window(const Trajectory& next) {
  if (next.window_count() != 1) throw InvalidArgument("can only append single-window trajectories");
  const double scale = std::max({1.0, std::abs(t_end()), std::abs(next.t_start())});
  if (std::abs(next.t_start() - t_end()) > 1e-12 * scale) {
    throw InvalidArgument("appended window must start where the trajectory ends");
  }
  require_same_grid(next.front().u, front().u);
  if (states_.size() == 1) {
    // A bare initial node is replaced by the window, which starts from it.
    states_.clear();
    window_starts_ = {0};
    states_.push_back(next.front());
  } else {
    window_starts_.push_back(states_.size() - 1);
  }
  for (std::size_t i = 1; i < next.size(); ++i) states_.push_back(next.state(i));
  validate();
}

void Trajectory::replace_back(StatePair state) {
  require_same_grid(state.u, front().u);
  state.t = states_.back().t;
  states_.back() = std::move(state);
}

StatePair Trajectory::interpolate(double t) const {
  if (t < t_start() || t > t_end()) throw InvalidArgument("interpolation time outside trajectory");
  std::size_t w = 0;
  while (w + 1 < window_count() && t > states_[window_end(w)].t) ++w;
  const auto nodes = window(w);
  for (const auto& s : nodes) {
    if (s.t == t) return s;
  }
  std::vector<double> x(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) x[j] = nodes[j].t - nodes.front().t;
  const auto bary = barycentric_weights(x);
  const auto coeff = lagrange_basis(x, bary, t - nodes.front().t);
  return StatePair(combine(nodes, coeff, true), combine(nodes, coeff, false), t);
}

}  // namespace mildflow
