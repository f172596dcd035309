#include "mildflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "mildflow/error.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

// Per-axis indices of flat point `idx` on a grid with `points` per axis.
void unflatten(std::size_t idx, int dimension, int points, int* out) {
  for (int a = dimension - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % points);
    idx /= points;
  }
}

std::size_t neighbour(std::size_t idx, int dimension, int points, int axis, int step) {
  int ijk[3];
  unflatten(idx, dimension, points, ijk);
  ijk[axis] = (ijk[axis] + step + points) % points;
  std::size_t out = 0;
  for (int a = 0; a < dimension; ++a) out = out * points + ijk[a];
  return out;
}

double periodic_distance_sq(std::size_t i, std::size_t j, int dimension, int points, double h) {
  int a_idx[3];
  int b_idx[3];
  unflatten(i, dimension, points, a_idx);
  unflatten(j, dimension, points, b_idx);
  double acc = 0.0;
  for (int a = 0; a < dimension; ++a) {
    int delta = std::abs(a_idx[a] - b_idx[a]);
    delta = std::min(delta, points - delta);
    acc += static_cast<double>(delta) * delta;
  }
  return acc * h * h;
}

double value_distance(const SampledField& f, std::size_t i, std::size_t j) {
  double acc = 0.0;
  for (const auto& comp : f.values) {
    const double diff = comp[i] - comp[j];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<ModulusSample> running_max(const std::vector<ModulusTable>& tables) {
  std::map<double, double> merged;
  for (const auto& table : tables) {
    for (const auto& s : table.eta) {
      auto& slot = merged[s.r];
      slot = std::max(slot, s.eta);
    }
  }
  std::vector<ModulusSample> out;
  double best = 0.0;
  for (const auto& [r, eta] : merged) {
    best = std::max(best, eta);
    out.push_back({r, best});
  }
  return out;
}

}  // namespace

SampledField sample(const VectorField& f, int points) {
  SampledField s;
  s.dimension = f.grid().dimension();
  s.points = points;
  s.period = f.grid().period();
  s.values = sample_field(f, points);
  return s;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

Mask Mask::full(int dimension, int points) {
  std::size_t size = 1;
  for (int a = 0; a < dimension; ++a) size *= static_cast<std::size_t>(points);
  return Mask{dimension, points, std::vector<std::uint8_t>(size, 1)};
}

double unit_length_deviation(const VectorField& d) {
  if (d.role() != FieldRole::director && d.components() != 3) {
    throw InvalidArgument("unit-length deviation needs a director field");
  }
  const auto s = sample(d, kSupNormOversampling * d.grid().modes_per_axis());
  double worst = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    double acc = 0.0;
    for (const auto& comp : s.values) acc += comp[x] * comp[x];
    worst = std::max(worst, std::abs(std::sqrt(acc) - 1.0));
  }
  return worst;
}

SmoothingTable smoothing_rate_check(const Trajectory& traj, int order, double growth_factor) {
  const int modes = traj.grid().modes_per_axis();
  if (order < 1 || 3 * (order + 1) > modes) {
    throw InvalidArgument("smoothing order must satisfy 1 <= l <= N/3 - 1");
  }
  SmoothingTable table;
  table.order = order;
  const double t0 = traj.t_start();
  for (const auto& s : traj.states()) {
    const double t = s.t - t0;
    if (t <= 0.0) continue;
    const double w = std::pow(t, 0.5 * order);
    SmoothingRow row{t, w * derivative_sup_norm(s.u, order), w * derivative_sup_norm(s.d, order + 1)};
    table.max_velocity_product = std::max(table.max_velocity_product, row.velocity_product);
    table.max_director_product = std::max(table.max_director_product, row.director_product);
    table.rows.push_back(row);
  }
  const std::size_t early = std::min(table.rows.size(), traj.window(0).size() - 1);
  for (std::size_t i = 1; i < early; ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    if ((a.velocity_product > 0 && b.velocity_product > growth_factor * a.velocity_product) ||
        (a.director_product > 0 && b.director_product > growth_factor * a.director_product)) {
      table.growth_flag = true;
    }
  }
  return table;
}

VorticityDirection vorticity_direction(const VectorField& u, double sigma, int oversampling) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (oversampling < 1) throw InvalidArgument("oversampling must be at least 1");
  const auto& grid = u.grid();
  const int points = oversampling * grid.modes_per_axis();
  VorticityDirection out{grid.dimension() == 3, curl(u), Mask{}, std::nullopt, 0.0, 0.0};
  const auto w = sample(out.omega, points);
  out.mask.dimension = grid.dimension();
  out.mask.points = points;
  out.mask.inside.assign(w.size(), 0);
  std::vector<double> magnitude(w.size());
  for (std::size_t x = 0; x < w.size(); ++x) {
    double acc = 0.0;
    for (const auto& comp : w.values) acc += comp[x] * comp[x];
    magnitude[x] = std::sqrt(acc);
    out.max_vorticity = std::max(out.max_vorticity, magnitude[x]);
    if (magnitude[x] > sigma) out.mask.inside[x] = 1;
  }
  out.mask_fraction = static_cast<double>(out.mask.count()) / static_cast<double>(w.size());
  if (!out.applicable) return out;

  SampledField zeta = w;
  for (std::size_t x = 0; x < w.size(); ++x) {
    for (auto& comp : zeta.values) comp[x] = out.mask.inside[x] ? comp[x] / magnitude[x] : 0.0;
  }
  out.zeta = std::move(zeta);
  return out;
}

std::vector<ModulusSample> modulus_of_continuity(const SampledField& f, const Mask& mask,
                                                 const ModulusOptions& options) {
  if (mask.points != f.points || mask.inside.size() != f.size()) {
    throw GridMismatch("mask and field use different sampling grids");
  }
  if (options.bins < 1) throw InvalidArgument("need at least one distance bin");
  std::vector<std::size_t> members;
  for (std::size_t x = 0; x < mask.inside.size(); ++x) {
    if (mask.inside[x]) members.push_back(x);
  }
  if (members.size() < 2) return {};

  const double h = f.spacing();
  const double r_min = h;
  const double r_max = std::sqrt(static_cast<double>(f.dimension)) * 0.5 * f.period;
  std::vector<double> edges(options.bins);
  for (int b = 0; b < options.bins; ++b) {
    edges[b] = options.bins == 1
                   ? r_max
                   : r_min * std::pow(r_max / r_min, static_cast<double>(b) / (options.bins - 1));
  }
  edges.back() = r_max * (1.0 + 1e-12);
  std::vector<double> edges_sq(edges.size());
  for (std::size_t b = 0; b < edges.size(); ++b) edges_sq[b] = edges[b] * edges[b] * (1.0 + 1e-12);

  std::vector<double> bin_max(edges.size(), 0.0);
  std::size_t first_bin = edges.size();
  std::size_t last_bin = 0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double d2 = periodic_distance_sq(i, j, f.dimension, f.points, h);
    const auto bin = static_cast<std::size_t>(
        std::lower_bound(edges_sq.begin(), edges_sq.end(), d2) - edges_sq.begin());
    const std::size_t b = std::min(bin, edges.size() - 1);
    bin_max[b] = std::max(bin_max[b], value_distance(f, i, j));
    first_bin = std::min(first_bin, b);
    last_bin = std::max(last_bin, b);
  };

  if (members.size() <= options.exact_limit) {
    for (std::size_t p = 0; p < members.size(); ++p) {
      for (std::size_t q = p + 1; q < members.size(); ++q) visit(members[p], members[q]);
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (std::size_t s = 0; s < options.sampled_pairs; ++s) {
      const std::size_t p = pick(rng);
      std::size_t q = pick(rng);
      while (q == p) q = pick(rng);
      visit(members[p], members[q]);
    }
  }

  std::vector<ModulusSample> out;
  double best = 0.0;
  for (std::size_t b = first_bin; b <= last_bin; ++b) {
    best = std::max(best, bin_max[b]);
    out.push_back({edges[b], best});
  }
  return out;
}

std::string_view to_string(BlowupClass c) {
  switch (c) {
    case BlowupClass::bounded: return "bounded";
    case BlowupClass::type_one_consistent: return "type-I-consistent";
    case BlowupClass::super_type_one: return "super-type-I";
  }
  return "unknown";
}

TypeOneResult type_one_rate(std::span<const std::pair<double, double>> series, double t_blow,
                            const TypeOneConfig& cfg) {
  if (series.empty()) throw InvalidArgument("type-I rate needs at least one sample");
  TypeOneResult out;
  for (const auto& [t, norm] : series) {
    if (!(t < t_blow)) throw InvalidArgument("type-I samples must precede the blow-up time");
    const double p = std::sqrt(t_blow - t) * norm;
    out.products.push_back(p);
    out.C_est = std::max(out.C_est, p);
  }
  const double last = out.products.back();
  if (last > cfg.growth_factor * median(out.products)) {
    out.classification = BlowupClass::super_type_one;
  } else if (last <= cfg.decay_fraction * out.C_est) {
    out.classification = BlowupClass::bounded;
  } else {
    out.classification = BlowupClass::type_one_consistent;
  }
  return out;
}

BlowupWindowConfig::BlowupWindowConfig(double sigma, double a, double b, std::optional<double> t_blow)
    : sigma_(sigma), a_(a), b_(b), t_blow_(t_blow) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(a >= 2.0) || !std::isfinite(a)) throw InvalidArgument("exponent a must satisfy 2 <= a < inf");
  if (!(b > 0.0)) throw InvalidArgument("exponent b must be positive");
  if (2.0 / a + 3.0 / b > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "exponents violate 2/a + 3/b <= 1 (a = " << a << ", b = " << b << ")";
    throw InvalidArgument(os.str());
  }
}

double direction_gradient_norm(const SampledField& zeta, const Mask& mask, double b,
                               const SpectralGrid& grid) {
  if (zeta.points != grid.modes_per_axis() || mask.points != zeta.points) {
    throw GridMismatch("direction gradient is evaluated on the native grid");
  }
  const int n = grid.dimension();
  const int points = zeta.points;
  const std::size_t size = zeta.size();
  if (mask.count() == 0) return 0.0;

  // Extension off the mask layer by layer: each cell takes the mean of its
  // neighbours in the previous layer, so the rule commutes with lattice symmetries.
  const std::size_t comps = zeta.values.size();
  std::vector<std::vector<double>> extended = zeta.values;
  std::vector<int> layer(size, -1);
  std::vector<std::size_t> front;
  for (std::size_t x = 0; x < size; ++x) {
    if (mask.inside[x]) {
      layer[x] = 0;
      front.push_back(x);
    }
  }
  for (int depth = 1; !front.empty(); ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t x : front) {
      for (int a = 0; a < n; ++a) {
        for (int step : {-1, 1}) {
          const std::size_t y = neighbour(x, n, points, a, step);
          if (layer[y] == -1) {
            layer[y] = depth;
            next.push_back(y);
          }
        }
      }
    }
    for (std::size_t y : next) {
      std::vector<double> sum(comps, 0.0);
      int count = 0;
      for (int a = 0; a < n; ++a) {
        for (int step : {-1, 1}) {
          const std::size_t x = neighbour(y, n, points, a, step);
          if (layer[x] != depth - 1) continue;
          for (std::size_t c = 0; c < comps; ++c) sum[c] += extended[c][x];
          ++count;
        }
      }
      for (std::size_t c = 0; c < comps; ++c) extended[c][y] = sum[c] / count;
    }
    front = std::move(next);
  }
  const auto field = VectorField::from_physical(grid, std::move(extended));
  const auto grad = gradient(field);

  std::vector<double> grad_sq(size, 0.0);
  for (std::size_t e = 0; e < grad.data().components(); ++e) {
    const auto& g = grad.data().physical(e);
    for (std::size_t x = 0; x < size; ++x) grad_sq[x] += g[x] * g[x];
  }
  const double cell = std::pow(grid.spacing(), n);
  double acc = 0.0;
  for (std::size_t x = 0; x < size; ++x) {
    if (!mask.inside[x]) continue;
    bool interior = true;
    for (int a = 0; a < n && interior; ++a) {
      for (int step : {-1, 1}) {
        if (!mask.inside[neighbour(x, n, points, a, step)]) interior = false;
      }
    }
    if (interior) acc += std::pow(grad_sq[x], 0.5 * b) * cell;
  }
  return std::pow(acc, 1.0 / b);
}

std::optional<double> direction_gradient_integral(const Trajectory& traj,
                                                  const BlowupWindowConfig& cfg) {
  if (traj.grid().dimension() != 3) return std::nullopt;
  std::vector<double> values;
  for (const auto& s : traj.states()) {
    const auto dir = vorticity_direction(s.u, cfg.sigma(), 1);
    values.push_back(std::pow(direction_gradient_norm(*dir.zeta, dir.mask, cfg.b(), traj.grid()),
                              cfg.a()));
  }
  double total = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    total += 0.5 * (values[i] + values[i - 1]) * (traj.state(i).t - traj.state(i - 1).t);
  }
  return total;
}

std::vector<NormSample> norm_series(const Trajectory& traj) {
  std::vector<NormSample> out;
  out.reserve(traj.size());
  for (const auto& s : traj.states()) {
    out.push_back({s.t, sup_norm(s.u), gradient_sup_norm(s.d), unit_length_deviation(s.d),
                   divergence_residual(s.u)});
  }
  return out;
}

DiagnosticsReport build_report(const Trajectory& traj, const DiagnosticsConfig& cfg) {
  DiagnosticsReport report;
  report.norms = norm_series(traj);
  report.smoothing = smoothing_rate_check(traj, cfg.smoothing_order);

  const double span = traj.t_end() - traj.t_start();
  report.t_blow = cfg.window.t_blow().value_or(traj.t_end() + 0.01 * std::max(span, 1e-12));
  std::vector<std::pair<double, double>> series;
  for (const auto& n : report.norms) {
    if (n.t < report.t_blow) series.emplace_back(n.t, n.sup_u + n.sup_grad_d);
  }
  if (!series.empty()) report.type_one = type_one_rate(series, report.t_blow, cfg.type_one);

  std::vector<std::size_t> sample_nodes;
  for (std::size_t w = 0; w < traj.window_count(); ++w) sample_nodes.push_back(traj.window_start(w));
  sample_nodes.push_back(traj.size() - 1);
  sample_nodes.erase(std::unique(sample_nodes.begin(), sample_nodes.end()), sample_nodes.end());

  const int native = traj.grid().modes_per_axis();
  report.vorticity_applicable = traj.grid().dimension() == 3;
  for (std::size_t idx : sample_nodes) {
    const auto& s = traj.state(idx);
    const auto d_samples = sample(s.d, native);
    report.eta_director.push_back(
        {s.t, modulus_of_continuity(d_samples, Mask::full(d_samples.dimension, native), cfg.modulus)});
    const auto dir = vorticity_direction(s.u, cfg.window.sigma());
    report.max_vorticity.push_back(dir.max_vorticity);
    report.mask_fraction.push_back(dir.mask_fraction);
    if (dir.applicable) {
      report.eta_direction.push_back({s.t, modulus_of_continuity(*dir.zeta, dir.mask, cfg.modulus)});
    }
  }
  report.eta_director_running_max = running_max(report.eta_director);
  report.eta_direction_running_max = running_max(report.eta_direction);
  report.direction_gradient_integral = direction_gradient_integral(traj, cfg.window);
  return report;
}

}  // namespace mildflow
