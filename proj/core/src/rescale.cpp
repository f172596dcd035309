#include "mildflow/rescale.hpp"

#include <algorithm>
#include <cmath>

#include "mildflow/chebyshev.hpp"
#include "mildflow/error.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/solver.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

constexpr double kTimeSlack = 1e-12;

VectorField shift_and_scale(const VectorField& f, const SpectralGrid& target,
                            std::span<const double> x_k, double factor) {
  const auto& grid = f.grid();
  const double scale = grid.wavenumber_scale();
  std::vector<VectorField::Spectrum> spectra = f.spectra();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double phase = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) phase += scale * grid.wavenumber(idx, a) * x_k[a];
    // The unpaired Nyquist mode only carries the cosine part on the grid.
    const Complex rot = grid.is_nyquist(idx) ? Complex(std::cos(phase), 0.0) : std::polar(1.0, phase);
    for (auto& spec : spectra) spec[idx] *= factor * rot;
  }
  return VectorField(target, std::move(spectra), f.role());
}

StatePair map_state(const StatePair& s, const SpectralGrid& target, const RescaleParams& p) {
  return StatePair(shift_and_scale(s.u, target, p.x_k, 1.0 / p.M),
                   shift_and_scale(s.d, target, p.x_k, 1.0), rescale_time(s.t, p));
}

bool near(double a, double b, double span) { return std::abs(a - b) <= kTimeSlack * std::max(1.0, span); }

}  // namespace

double rescale_time(double t, const RescaleParams& p) { return p.M * p.M * (t - p.t_k); }

ZoomResult zoom(const Trajectory& traj, const RescaleParams& p) {
  const auto& grid = traj.grid();
  if (!(p.M > 0.0) || !std::isfinite(p.M)) throw InvalidArgument("zoom factor M must be positive");
  if (p.x_k.size() != static_cast<std::size_t>(grid.dimension())) {
    throw InvalidArgument("x_k must have one coordinate per axis");
  }
  for (double x : p.x_k) {
    if (!(x >= 0.0 && x < grid.period())) throw InvalidArgument("x_k must lie in the fundamental domain");
  }
  const double span = traj.t_end() - traj.t_start();
  const double begin = p.t_k;
  const double end = p.duration ? p.t_k + *p.duration / (p.M * p.M) : traj.t_end();
  if (p.duration && !(*p.duration > 0.0)) throw InvalidArgument("zoom duration must be positive");
  if (begin < traj.t_start() - kTimeSlack * std::max(1.0, span) ||
      !(begin < traj.t_end()) || end > traj.t_end() + kTimeSlack * std::max(1.0, span)) {
    throw InvalidArgument("rescaled window exits the source trajectory");
  }

  const SpectralGrid target(grid.dimension(), grid.modes_per_axis(), grid.period() * p.M);
  std::optional<Trajectory> out;
  for (std::size_t w = 0; w < traj.window_count(); ++w) {
    const auto nodes = traj.window(w);
    const double a = std::max(begin, nodes.front().t);
    const double b = std::min(end, nodes.back().t);
    if (!(b - a > kTimeSlack * std::max(1.0, span))) continue;
    std::vector<StatePair> states;
    if (near(a, nodes.front().t, span) && near(b, nodes.back().t, span)) {
      for (const auto& s : nodes) states.push_back(map_state(s, target, p));
    } else {
      for (double x : lobatto_nodes(static_cast<int>(nodes.size()))) {
        const double t = x == 0.0 ? a : (x == 1.0 ? b : a + x * (b - a));
        states.push_back(map_state(traj.interpolate(t), target, p));
      }
      states.front().t = rescale_time(a, p);
      states.back().t = rescale_time(b, p);
    }
    Trajectory piece(std::move(states));
    if (!out) {
      out = std::move(piece);
    } else {
      out->append_window(piece);
    }
  }
  if (!out) {
    // t_k on the final node: a single-node trajectory.
    out = Trajectory({map_state(traj.back(), target, p)});
  }
  return {std::move(*out), std::abs(p.M - std::round(p.M)) > 1e-12};
}

RescaleParams compose(const RescaleParams& first, const RescaleParams& second) {
  if (first.x_k.size() != second.x_k.size()) throw InvalidArgument("zoom dimensions differ");
  RescaleParams out;
  out.M = first.M * second.M;
  out.t_k = first.t_k + second.t_k / (first.M * first.M);
  out.x_k.resize(first.x_k.size());
  for (std::size_t a = 0; a < out.x_k.size(); ++a) out.x_k[a] = first.x_k[a] + second.x_k[a] / first.M;
  if (second.duration) out.duration = *second.duration;
  return out;
}

double residual_check(const Trajectory& traj) {
  if (traj.size() < 2) return 0.0;
  double worst = 0.0;
  for (std::size_t w = 0; w < traj.window_count(); ++w) {
    const auto window = traj.window_trajectory(w);
    const auto image = duhamel_map(window.front().u, window.front().d, window);
    worst = std::max(worst, trajectory_distance(window, image));
  }
  return worst;
}

std::vector<double> argmax_point(const Trajectory& traj) {
  const auto& s = traj.back();
  const auto& grid = s.u.grid();
  std::vector<double> magnitude(grid.size(), 0.0);
  for (std::size_t c = 0; c < s.u.components(); ++c) {
    const auto& v = s.u.physical(c);
    for (std::size_t x = 0; x < grid.size(); ++x) magnitude[x] += v[x] * v[x];
  }
  for (double& m : magnitude) m = std::sqrt(m);
  const auto g = gradient(s.d);
  std::vector<double> grad(grid.size(), 0.0);
  for (std::size_t e = 0; e < g.data().components(); ++e) {
    const auto& v = g.data().physical(e);
    for (std::size_t x = 0; x < grid.size(); ++x) grad[x] += v[x] * v[x];
  }
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const double v = magnitude[x] + std::sqrt(grad[x]);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }
  std::vector<double> point(grid.dimension());
  for (int a = 0; a < grid.dimension(); ++a) point[a] = grid.coordinate(best, a);
  return point;
}

std::vector<std::pair<double, double>> rescale_norm_series(
    std::span<const std::pair<double, double>> series, const RescaleParams& p) {
  if (!(p.M > 0.0)) throw InvalidArgument("zoom factor M must be positive");
  std::vector<std::pair<double, double>> out;
  out.reserve(series.size());
  for (const auto& [t, norm] : series) out.emplace_back(rescale_time(t, p), norm / p.M);
  return out;
}

}  // namespace mildflow
