#include "mildflow/solver.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <sstream>

#include "mildflow/chebyshev.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

struct NonlinearSamples {
  std::vector<VectorField> velocity;  // -P div(u (x) u + grad d (.) grad d)
  std::vector<VectorField> director;  // |grad d|^2 d - (u . grad) d
};

double spectral_l1(const VectorField& f) {
  double total = 0.0;
  for (const auto& s : f.spectra()) {
    for (const auto& v : s) total += std::abs(v);
  }
  return total;
}

void require_divergence_free(const VectorField& u0) {
  const double residual = divergence_residual(u0);
  if (residual > 1e-10 * std::max(1.0, spectral_l1(u0))) {
    std::ostringstream os;
    os << "initial velocity is not divergence-free (spectral residual " << residual << ")";
    throw InvalidArgument(os.str());
  }
}

NonlinearSamples evaluate_nonlinear(const Trajectory& input, const NonlinearOptions& options) {
  NonlinearSamples out;
  out.velocity.reserve(input.size());
  out.director.reserve(input.size());
  for (const auto& s : input.states()) {
    auto fu = leray_project(momentum_nonlinearity(s.u, s.d, options));
    fu *= -1.0;
    out.velocity.push_back(std::move(fu));
    out.director.push_back(director_nonlinearity(s.u, s.d, options));
  }
  return out;
}

VectorField apply_window(const VectorField& initial, const std::vector<VectorField>* sources,
                         const DuhamelWeights& weights, std::size_t node) {
  const auto& grid = initial.grid();
  const std::size_t m = weights.nodes();
  std::vector<VectorField::Spectrum> spectra(initial.components(),
                                             VectorField::Spectrum(grid.size()));
  for (std::size_t c = 0; c < initial.components(); ++c) {
    const auto init = initial.spectral(c);
    auto& out = spectra[c];
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::size_t cls = grid.wavenumber_class(k);
      Complex acc = weights.decay(cls, node) * init[k];
      if (sources) {
        for (std::size_t j = 0; j < m; ++j) {
          acc += weights.weight(cls, node, j) * (*sources)[j].spectral(c)[k];
        }
      }
      out[k] = acc;
    }
  }
  return VectorField(grid, std::move(spectra), initial.role());
}

Trajectory apply_duhamel(const VectorField& u0, const VectorField& d0, const Trajectory& input,
                         const DuhamelWeights& weights, const NonlinearSamples* samples) {
  std::vector<StatePair> out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out.emplace_back(apply_window(u0, samples ? &samples->velocity : nullptr, weights, i),
                     apply_window(d0, samples ? &samples->director : nullptr, weights, i),
                     input.state(i).t);
  }
  return Trajectory(std::move(out));
}

std::vector<double> window_offsets(const Trajectory& input) {
  std::vector<double> offsets;
  offsets.reserve(input.size());
  for (const auto& s : input.states()) offsets.push_back(s.t - input.t_start());
  return offsets;
}

void check_inputs(const VectorField& u0, const VectorField& d0, const Trajectory& input) {
  require_same_grid(u0, d0);
  require_same_grid(u0, input.front().u);
  if (input.window_count() != 1 || input.size() < 2) {
    throw InvalidArgument("the Duhamel map acts on a single window with at least two nodes");
  }
  if (u0.components() != static_cast<std::size_t>(u0.grid().dimension())) {
    throw GridMismatch("velocity must have one component per dimension");
  }
  require_divergence_free(u0);
}

// Chebyshev tail |c_{m-1}| + |c_{m-2}| of one mode across the window nodes.
double chebyshev_tail(const std::vector<VectorField>& series, std::size_t c, std::size_t k) {
  const std::size_t m = series.size();
  std::vector<double> re(m);
  std::vector<double> im(m);
  for (std::size_t j = 0; j < m; ++j) {
    re[j] = series[j].spectral(c)[k].real();
    im[j] = series[j].spectral(c)[k].imag();
  }
  const auto cr = chebyshev_coefficients(re);
  const auto ci = chebyshev_coefficients(im);
  double tail = std::hypot(cr[m - 1], ci[m - 1]);
  if (m >= 3) tail += std::hypot(cr[m - 2], ci[m - 2]);
  return tail;
}

double quadrature_error_model(const NonlinearSamples& samples, double window) {
  const auto& grid = samples.velocity.front().grid();
  const double scale = grid.wavenumber_scale();
  double err_u = 0.0;
  double err_d = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lambda = grid.laplacian_eigenvalue(k);
    const double w = lambda > 0.0 ? std::min(window, 1.0 / lambda) : window;
    double tu = 0.0;
    for (std::size_t c = 0; c < samples.velocity.front().components(); ++c) {
      const double t = chebyshev_tail(samples.velocity, c, k);
      tu += t * t;
    }
    double td = 0.0;
    for (std::size_t c = 0; c < samples.director.front().components(); ++c) {
      const double t = chebyshev_tail(samples.director, c, k);
      td += t * t;
    }
    double kabs = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) kabs += std::abs(grid.wavenumber(k, a)) * scale;
    err_u += w * std::sqrt(tu);
    err_d += w * (1.0 + kabs) * std::sqrt(td);
  }
  return err_u + err_d;
}

Trajectory free_evolution(const VectorField& u0, const VectorField& d0, std::span<const double> times,
                          double t0) {
  std::vector<StatePair> states;
  states.reserve(times.size());
  for (double t : times) {
    const double tau = std::max(0.0, t - t0);
    states.emplace_back(heat_semigroup(u0, tau), heat_semigroup(d0, tau), t);
  }
  return Trajectory(std::move(states));
}

}  // namespace

SolverConstants solver_constants(const VectorField& u0, const VectorField& d0, double C_star,
                                 double T_max) {
  if (!(C_star > 0.0)) throw InvalidArgument("C_star must be positive");
  SolverConstants k;
  k.C_star = C_star;
  k.sup_u0 = sup_norm(u0);
  k.sobolev_d0 = sobolev_inf_norm(d0, 1);
  k.sup_grad_d0 = gradient_sup_norm(d0);
  k.K_star = 2.0 * C_star * (k.sup_u0 + k.sobolev_d0);
  const double kk = k.K_star + k.K_star * k.K_star;
  if (kk > 0.0) {
    k.T_star = std::min(1.0 / (4.0 * C_star * kk), 1.0 / (16.0 * C_star * C_star * kk * kk));
  } else {
    k.T_star = T_max;
  }
  const double data = k.sup_u0 + k.sup_grad_d0;
  k.T0 = data > 0.0 ? std::pow(1.0 / (4.0 * C_star * data), 2) : T_max;
  return k;
}

double existence_time_estimate(const VectorField& u0, const VectorField& d0, double C_star,
                               double T_max) {
  require_same_grid(u0, d0);
  if (!(C_star > 0.0)) throw InvalidArgument("C_star must be positive");
  const double data = sup_norm(u0) + gradient_sup_norm(d0);
  if (data == 0.0) return T_max;
  return std::pow(1.0 / (4.0 * C_star * data), 2);
}

Trajectory duhamel_map(const VectorField& u0, const VectorField& d0, const Trajectory& input,
                       const DuhamelOptions& options) {
  check_inputs(u0, d0, input);
  const DuhamelWeights weights(u0.grid(), window_offsets(input));
  return duhamel_map(u0, d0, input, weights, options);
}

Trajectory duhamel_map(const VectorField& u0, const VectorField& d0, const Trajectory& input,
                       const DuhamelWeights& weights, const DuhamelOptions& options) {
  check_inputs(u0, d0, input);
  if (weights.nodes() != input.size()) throw InvalidArgument("weight table has wrong node count");
  if (!options.include_nonlinear) return apply_duhamel(u0, d0, input, weights, nullptr);
  const auto samples = evaluate_nonlinear(input, options.nonlinear);
  return apply_duhamel(u0, d0, input, weights, &samples);
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw InvalidArgument("trajectories have different node counts");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto du = a.state(i).u - b.state(i).u;
    const auto dd = a.state(i).d - b.state(i).d;
    worst = std::max(worst, sup_norm(du) + sobolev_inf_norm(dd, 1));
  }
  return worst;
}

PicardResult picard_solve(const VectorField& u0, const VectorField& d0, double T,
                          const SolverConfig& cfg, double t0) {
  require_same_grid(u0, d0);
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("window length must be positive");
  require_divergence_free(u0);

  const auto consts = solver_constants(u0, d0, cfg.C_star, cfg.T_max);
  PicardRecord record;
  record.window_start = t0;
  record.window_length = T;
  record.exceeded_T_star = T > consts.T_star;

  std::vector<double> offsets = lobatto_nodes(cfg.quadrature_nodes);
  for (double& x : offsets) x *= T;
  std::vector<double> times(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) times[i] = t0 + offsets[i];
  times.back() = t0 + T;

  const VectorField u_init = u0.with_role(FieldRole::velocity);
  const VectorField d_init = d0.with_role(FieldRole::director);

  if (consts.sup_u0 == 0.0 && consts.sup_grad_d0 == 0.0) {
    std::vector<StatePair> states;
    for (double t : times) states.emplace_back(u_init, d_init, t);
    record.iterations = 1;
    record.distances = {0.0};
    record.converged = true;
    return {Trajectory(std::move(states)), record};
  }

  const DuhamelWeights weights(u0.grid(), offsets);
  Trajectory current = free_evolution(u_init, d_init, times, t0);
  const double floor = 1e-13 * (1.0 + consts.sup_u0 + consts.sobolev_d0);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto samples = evaluate_nonlinear(current, cfg.nonlinear);
    Trajectory next = apply_duhamel(u_init, d_init, current, weights, &samples);
    const double delta = trajectory_distance(next, current);
    record.iterations = it;
    record.distances.push_back(delta);
    if (it >= 2) {
      const double prev = record.distances[it - 2];
      if (prev > floor && delta > floor) {
        record.ratios.push_back(delta / prev);
        record.contraction_ratio = record.ratios.back();
      }
    }
    if (!std::isfinite(delta) || delta > cfg.divergence_threshold) {
      std::ostringstream os;
      os << "Picard iteration diverged at iteration " << it << " (distance " << delta
         << ", window [" << t0 << ", " << t0 + T << "])";
      throw PicardFailure(PicardFailure::Kind::divergence, record, os.str());
    }
    current = std::move(next);
    if (delta <= cfg.tol) {
      record.converged = true;
      record.quadrature_error = quadrature_error_model(samples, T);
      return {std::move(current), record};
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not reach tolerance " << cfg.tol << " in " << cfg.max_iter
     << " iterations (last distance " << record.distances.back() << ", window [" << t0 << ", "
     << t0 + T << "])";
  throw PicardFailure(PicardFailure::Kind::non_convergence, record, os.str());
}

VectorField renormalize_director(const VectorField& d) {
  std::vector<std::vector<double>> samples;
  for (std::size_t c = 0; c < d.components(); ++c) samples.push_back(d.physical(c));
  for (std::size_t x = 0; x < d.grid().size(); ++x) {
    double norm = 0.0;
    for (const auto& s : samples) norm += s[x] * s[x];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (auto& s : samples) s[x] /= norm;
  }
  return VectorField::from_physical(d.grid(), std::move(samples), d.role());
}

MarchResult march(const VectorField& u0, const VectorField& d0, double T_total,
                  const SolverConfig& cfg) {
  require_same_grid(u0, d0);
  if (!(T_total > 0.0) || !std::isfinite(T_total)) throw InvalidArgument("T_total must be positive");
  require_divergence_free(u0);

  MarchResult result{Trajectory({StatePair(u0.with_role(FieldRole::velocity),
                                           d0.with_role(FieldRole::director), 0.0)}),
                     {}, false, ""};
  double t = 0.0;
  VectorField u = result.trajectory.back().u;
  VectorField d = result.trajectory.back().d;
  const double end_slack = 1e-12 * std::max(1.0, T_total);

  while (T_total - t > end_slack) {
    const auto consts = solver_constants(u, d, cfg.C_star, cfg.T_max);
    const double planned = cfg.safety * consts.T0;
    if (planned < cfg.min_window) {
      result.blowup_flagged = true;
      std::ostringstream os;
      os << "existence-time estimate " << consts.T0 << " at t = " << t
         << " gives a window below min_window " << cfg.min_window;
      result.stop_reason = os.str();
      return result;
    }
    double length = std::min({planned, T_total - t, cfg.max_window});
    int retries = 0;
    std::optional<PicardResult> solved;
    while (!solved) {
      try {
        solved = picard_solve(u, d, length, cfg, t);
      } catch (const PicardFailure& failure) {
        ++retries;
        length *= 0.5;
        if (retries > cfg.max_retries || length < cfg.min_window) {
          result.blowup_flagged = true;
          std::ostringstream os;
          os << "window " << result.windows.size() << " starting at t = " << t << " failed after "
             << retries << " attempts: " << failure.what();
          result.stop_reason = os.str();
          throw MarchFailure(result.windows.size(), t, failure.record(), result, os.str());
        }
      }
    }
    WindowReport report;
    report.index = result.windows.size();
    report.t_start = t;
    report.length = length;
    report.retries = retries;
    report.constants = consts;
    report.record = solved->record;
    result.trajectory.append_window(solved->trajectory);
    t = solved->trajectory.t_end();
    u = result.trajectory.back().u;
    d = result.trajectory.back().d;
    if (cfg.renormalize) {
      d = renormalize_director(d);
      result.trajectory.replace_back(StatePair(u, d, t));
    }
    report.sup_u_end = sup_norm(u);
    report.sup_grad_d_end = gradient_sup_norm(d);
    result.windows.push_back(std::move(report));
  }
  return result;
}

}  // namespace mildflow
