#include <catch_amalgamated.hpp>

#include <cmath>

#include "mildflow/chebyshev.hpp"
#include "mildflow/error.hpp"
#include "mildflow/exponential_weights.hpp"
#include "mildflow/initial_data.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/solver.hpp"
#include "mildflow/spectral.hpp"
#include "oracles.hpp"

using namespace mildflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

VectorField e3(const SpectralGrid& g) {
  return VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
}

VectorField band_velocity(const SpectralGrid& g, double amplitude, std::uint64_t seed) {
  VelocitySpec v;
  v.family = "random_band";
  v.amplitude = amplitude;
  v.band_min = 1;
  v.band_max = 2;
  return make_velocity(g, v, seed);
}

VectorField geodesic(const SpectralGrid& g, double amplitude) {
  DirectorSpec d;
  d.family = "geodesic_director";
  d.amplitude = amplitude;
  return make_director(g, d, 0);
}

// int_0^tau e^{-lam (tau - s)} s^2 ds
double moment_s2(double lambda, double tau) {
  const double l = lambda;
  return tau * tau / l - 2 * tau / (l * l) + 2 / (l * l * l) - 2 * std::exp(-l * tau) / (l * l * l);
}

}  // namespace

TEST_CASE("Chebyshev tools", "[chebyshev]") {
  const auto x = lobatto_nodes(9);
  CHECK(x.front() == 0.0);
  CHECK(x.back() == 1.0);
  std::vector<double> values(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) values[i] = std::pow(x[i], 3) - x[i];
  const auto c = chebyshev_coefficients(values);
  CHECK_THAT(chebyshev_evaluate(c, 0.3), WithinAbs(0.027 - 0.3, 1e-14));
  const auto dc = chebyshev_derivative(c);
  CHECK_THAT(chebyshev_evaluate(dc, 0.3), WithinAbs(3 * 0.09 - 1, 1e-13));

  const auto w = barycentric_weights(x);
  const auto l = lagrange_basis(x, w, 0.41);
  double interp = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) interp += l[j] * values[j];
  CHECK_THAT(interp, WithinAbs(std::pow(0.41, 3) - 0.41, 1e-14));

  const auto& gl = gauss_legendre(16);
  double integral = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) integral += gl.weights[i] * std::pow(gl.nodes[i], 20);
  CHECK_THAT(integral, WithinRel(1.0 / 21.0, 1e-14));
}

TEST_CASE("exponential moments", "[weights]") {
  // p(s) = s^2 on a window of length T, as a Chebyshev series in s / T.
  const double T = 0.5;
  const auto x = lobatto_nodes(6);
  std::vector<double> values(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) values[i] = (T * x[i]) * (T * x[i]);
  const auto c = chebyshev_coefficients(values);
  for (double lambda : {1.0, 50.0, 400.0, 1e4}) {
    for (double tau : {0.1, 0.5}) {
      CHECK_THAT(exponential_moment(c, T, tau, lambda), WithinRel(moment_s2(lambda, tau), 1e-12));
    }
  }
  CHECK(exponential_moment(c, T, 0.0, 3.0) == 0.0);
}

TEST_CASE("Duhamel weights integrate constants exactly", "[weights]") {
  const auto g = make_grid(2, 32);
  auto offsets = lobatto_nodes(8);
  for (double& t : offsets) t *= 0.3;
  const DuhamelWeights w(g, offsets);
  for (std::size_t cls = 0; cls < w.classes(); ++cls) {
    const double lambda = w.eigenvalue(cls);
    for (std::size_t i = 0; i < w.nodes(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < w.nodes(); ++j) sum += w.weight(cls, i, j);
      const double tau = offsets[i];
      const double exact = lambda == 0.0 ? tau : -std::expm1(-lambda * tau) / lambda;
      REQUIRE_THAT(sum, WithinAbs(exact, 1e-14 * std::max(1.0, tau)));
      REQUIRE_THAT(w.decay(cls, i), WithinRel(std::exp(-lambda * tau), 1e-15));
    }
  }
  CHECK_THROWS_AS(DuhamelWeights(g, std::vector<double>{0.0}), InvalidArgument);
  CHECK_THROWS_AS(DuhamelWeights(g, std::vector<double>{0.1, 0.2}), InvalidArgument);
}

TEST_CASE("Duhamel map", "[duhamel]") {
  const auto g = make_grid(2, 32);
  SECTION("vanishing nonlinearity is a fixed point") {
    const VectorField u0(g, 2, FieldRole::velocity);
    const auto input = Trajectory::constant(StatePair(u0, e3(g), 0.0), 0.0, 0.2, 6);
    const auto out = duhamel_map(u0, e3(g), input);
    CHECK(trajectory_distance(out, input) <= 1e-15);
  }
  SECTION("linear part only") {
    const auto u0 = band_velocity(g, 1.0, 2);
    const auto d0 = geodesic(g, 0.3);
    const auto input = Trajectory::constant(StatePair(u0, d0, 0.0), 0.0, 0.2, 6);
    DuhamelOptions opts;
    opts.include_nonlinear = false;
    const auto out = duhamel_map(u0, d0, input, opts);
    for (const auto& s : out.states()) {
      CHECK(sup_norm(s.u - heat_semigroup(u0, s.t)) <= 1e-15);
      CHECK(sup_norm(s.d - heat_semigroup(d0, s.t)) <= 1e-15);
    }
  }
  SECTION("frozen convection against dense trapezoid quadrature") {
    const auto u0 = band_velocity(g, 1.0, 4);
    const auto input = Trajectory::constant(StatePair(u0, e3(g), 0.0), 0.0, 0.05, 8);
    const auto out = duhamel_map(u0, e3(g), input);
    const auto source = oracle::projected_convection(u0);
    double err = 0.0;
    for (const auto& s : out.states()) {
      std::vector<VectorField::Spectrum> spec(2, VectorField::Spectrum(g.size()));
      for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t k = 0; k < g.size(); ++k) {
          spec[c][k] = oracle::trapezoid_duhamel(u0.spectral(c)[k], source.spectral(c)[k],
                                                 g.laplacian_eigenvalue(k), s.t, 1000);
        }
      }
      err = std::max(err, sup_norm(s.u - VectorField(g, spec)));
    }
    CHECK(err <= 1e-8);
  }
  SECTION("preconditions") {
    const auto bad = VectorField::from_function(
        g, 2,
        [](auto x, auto out) {
          out[0] = std::sin(x[0]);
          out[1] = 0.0;
        },
        FieldRole::velocity);
    const auto input = Trajectory::constant(StatePair(bad, e3(g), 0.0), 0.0, 0.1, 4);
    CHECK_THROWS_AS(duhamel_map(bad, e3(g), input), InvalidArgument);
    const auto other = make_grid(2, 16);
    CHECK_THROWS_AS(duhamel_map(VectorField(other, 2, FieldRole::velocity), e3(other), input), GridMismatch);
  }
}

TEST_CASE("solver constants", "[picard]") {
  const auto g = make_grid(2, 32);
  const auto u = taylor_green(g, 1.0);
  CHECK_THAT(existence_time_estimate(u, e3(g), 1.0), WithinRel(1.0 / 16.0, 1e-12));
  CHECK_THAT(existence_time_estimate(2.0 * u, e3(g), 1.0),
             WithinRel(existence_time_estimate(u, e3(g), 1.0) / 4.0, 1e-12));
  CHECK(existence_time_estimate(VectorField(g, 2, FieldRole::velocity), e3(g), 1.0, 3.5) == 3.5);

  const auto c = solver_constants(u, e3(g), 2.0);
  const double K = 2 * 2.0 * (1.0 + 1.0);
  CHECK_THAT(c.K_star, WithinRel(K, 1e-12));
  CHECK_THAT(c.T_star, WithinRel(std::min(1 / (4 * 2.0 * (K + K * K)), 1 / (16 * 4.0 * std::pow(K + K * K, 2))), 1e-12));
}

TEST_CASE("Picard iteration", "[picard]") {
  SECTION("zero data converges immediately") {
    const auto g = make_grid(2, 16);
    const auto r = picard_solve(VectorField(g, 2, FieldRole::velocity), e3(g), 5.0, SolverConfig{});
    CHECK(r.record.converged);
    CHECK(r.record.iterations == 1);
    for (const auto& s : r.trajectory.states()) CHECK(sup_norm(s.d - e3(g)) == 0.0);
  }
  SECTION("Taylor-Green decay") {
    const auto g = make_grid(2, 64);
    const auto r = picard_solve(taylor_green(g, 1.0), e3(g), 0.1, SolverConfig{});
    CHECK_THAT(sup_norm(r.trajectory.back().u), WithinAbs(std::exp(-0.2), 1e-6));
  }
  SECTION("contraction and fixed-point residual") {
    const auto g = make_grid(2, 32);
    const auto u0 = band_velocity(g, 0.25, 6);
    const auto d0 = geodesic(g, 0.25);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const auto consts = solver_constants(u0, d0, cfg.C_star);
    const auto r = picard_solve(u0, d0, consts.T_star, cfg);
    REQUIRE(r.record.converged);
    CHECK_FALSE(r.record.exceeded_T_star);
    for (double ratio : r.record.ratios) CHECK(ratio <= 0.55);
    const auto image = duhamel_map(u0, d0, r.trajectory);
    CHECK(trajectory_distance(image, r.trajectory) <= 10 * cfg.tol);

    // A longer window still converges; the distances stay nonnegative.
    const auto longer = picard_solve(u0, d0, 0.2, cfg);
    CHECK(longer.record.exceeded_T_star);
    for (double dist : longer.record.distances) CHECK(dist >= 0.0);
    CHECK(trajectory_distance(duhamel_map(u0, d0, longer.trajectory), longer.trajectory) <= 10 * cfg.tol);
  }
  SECTION("non-convergence carries the record") {
    const auto g = make_grid(2, 32);
    SolverConfig cfg;
    cfg.max_iter = 3;
    try {
      picard_solve(band_velocity(g, 5.0, 1), geodesic(g, 0.5), 0.5, cfg);
      FAIL("expected a Picard failure");
    } catch (const PicardFailure& f) {
      CHECK(f.record().iterations == 3);
      CHECK(f.record().distances.size() == 3);
      CHECK_FALSE(f.record().converged);
    }
  }
}

TEST_CASE("window marching", "[march]") {
  const auto g = make_grid(2, 32);
  SECTION("Taylor-Green through fixed windows") {
    SolverConfig cfg;
    cfg.max_window = 0.1;
    cfg.safety = 1.0;
    cfg.C_star = 0.5;
    const auto r = march(taylor_green(g, 1.0), e3(g), 1.0, cfg);
    CHECK(r.windows.size() == 10);
    CHECK(r.trajectory.window_count() == 10);
    for (const auto& s : r.trajectory.states()) {
      REQUIRE_THAT(sup_norm(s.u), WithinAbs(std::exp(-2 * s.t), 1e-6));
    }
  }
  SECTION("window count covers the horizon") {
    SolverConfig cfg;
    const auto u0 = taylor_green(g, 1.0);
    const double T0 = existence_time_estimate(u0, e3(g), cfg.C_star);
    const auto r = march(u0, e3(g), 0.3, cfg);
    CHECK(r.windows.size() <= static_cast<std::size_t>(std::ceil(0.3 / (cfg.safety * T0))));
    CHECK_THAT(r.trajectory.t_end(), WithinAbs(0.3, 1e-14));
    for (std::size_t w = 1; w + 1 < r.windows.size(); ++w) {
      CHECK(r.windows[w].length >= r.windows[w - 1].length * (1 - 1e-12));
    }

    // Constant norms: every window has the planned length.
    SolverConfig capped;
    capped.T_max = 0.1;
    const auto steady = march(VectorField(g, 2, FieldRole::velocity), e3(g), 1.0, capped);
    CHECK(steady.windows.size() == 20);
  }
  SECTION("blow-up flag when the window would be too short") {
    SolverConfig cfg;
    cfg.min_window = 0.1;
    const auto r = march(taylor_green(g, 10.0), e3(g), 1.0, cfg);
    CHECK(r.blowup_flagged);
    CHECK(r.windows.empty());
  }
  SECTION("failure propagates with window context") {
    SolverConfig cfg;
    cfg.max_iter = 2;
    cfg.max_retries = 1;
    try {
      march(band_velocity(g, 5.0, 1), geodesic(g, 0.5), 1.0, cfg);
      FAIL("expected a march failure");
    } catch (const MarchFailure& f) {
      CHECK(f.window() == 0);
      CHECK(f.partial().blowup_flagged);
    }
  }
}
