#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mildflow/diagnostics.hpp"
#include "mildflow/error.hpp"
#include "mildflow/initial_data.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/solver.hpp"
#include "oracles.hpp"

using namespace mildflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

VectorField fn(const SpectralGrid& grid, std::size_t comps, VectorField::PointFunction f,
               FieldRole role = FieldRole::generic) {
  return VectorField::from_function(grid, comps, f, role);
}

VectorField abc_flow(const SpectralGrid& g, double A, double B, double C) {
  VelocitySpec v;
  v.family = "beltrami";
  v.amplitude = 1.0;
  v.abc = {A, B, C};
  return make_velocity(g, v, 0);
}

// u'(x) = R u(R^{-1} x) for the quarter turn R(x1, x2, x3) = (-x2, x1, x3).
VectorField quarter_turn(const VectorField& u) {
  const auto& g = u.grid();
  const int N = g.modes_per_axis();
  std::vector<VectorField::Samples> out(3, VectorField::Samples(g.size()));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        const std::size_t dst = (static_cast<std::size_t>(i) * N + j) * N + k;
        const std::size_t src = (static_cast<std::size_t>(j) * N + (N - i) % N) * N + k;
        out[0][dst] = -u.physical(1)[src];
        out[1][dst] = u.physical(0)[src];
        out[2][dst] = u.physical(2)[src];
      }
    }
  }
  return VectorField::from_physical(g, std::move(out), FieldRole::velocity);
}

bool monotone(const std::vector<ModulusSample>& eta) {
  for (std::size_t i = 1; i < eta.size(); ++i) {
    if (eta[i].eta < eta[i - 1].eta || eta[i].r <= eta[i - 1].r) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("unit length deviation", "[diagnostics]") {
  const auto g = make_grid(2, 32);
  const auto d = fn(
      g, 3,
      [](auto x, auto out) {
        out[0] = std::cos(x[0]);
        out[1] = std::sin(x[0]);
        out[2] = 0.0;
      },
      FieldRole::director);
  CHECK(unit_length_deviation(d) <= 1e-12);
  const auto c = VectorField::constant(g, std::vector<double>{0, 0, 1.1}, FieldRole::director);
  CHECK_THAT(unit_length_deviation(c), WithinAbs(0.1, 1e-14));
}

TEST_CASE("smoothing-rate table", "[diagnostics]") {
  const auto g = make_grid(2, 32);
  const auto d0 = VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
  SolverConfig cfg;
  cfg.quadrature_nodes = 12;

  SECTION("smooth data") {
    const auto r = march(taylor_green(g, 1.0), d0, 0.1, cfg);
    const auto table = smoothing_rate_check(r.trajectory, 1);
    CHECK_FALSE(table.growth_flag);
    CHECK(table.rows.size() == r.trajectory.size() - 1);
    CHECK(table.max_velocity_product <= std::sqrt(0.1) * 1.5);
  }
  SECTION("rough data stays bounded") {
    VelocitySpec v;
    v.family = "random_band";
    v.amplitude = 1.0;
    v.band_min = 1;
    v.band_max = 10;
    const auto u0 = make_velocity(g, v, 17);
    const auto r = march(u0, d0, 0.1, cfg);
    const auto table = smoothing_rate_check(r.trajectory, 1);
    double measured = 0.0;
    for (const auto& row : table.rows) {
      if (row.t >= 1e-3) measured = std::max(measured, row.velocity_product);
    }
    // Heat-kernel smoothing constant (Lemma-2.1 type) measured around 1;
    // the recorded bound leaves room for the nonlinear correction.
    CHECK(measured <= 2.0 * sup_norm(u0));
    CHECK_FALSE(table.growth_flag);
  }
  SECTION("order too large") {
    const auto traj = Trajectory::constant(StatePair(taylor_green(g, 1.0), d0, 0.0), 0.0, 0.1, 4);
    CHECK_THROWS_AS(smoothing_rate_check(traj, 10), InvalidArgument);
  }
}

TEST_CASE("vorticity direction", "[diagnostics]") {
  const auto g = make_grid(3, 16);
  const auto u = fn(
      g, 3,
      [](auto x, auto out) {
        out[0] = -std::sin(x[1]);
        out[1] = 0.0;
        out[2] = 0.0;
      },
      FieldRole::velocity);
  const auto v = vorticity_direction(u, 0.5);
  REQUIRE(v.applicable);
  REQUIRE(v.zeta.has_value());
  const int P = v.mask.points;
  CHECK(P == 32);
  const double h = 2 * pi / P;
  for (std::size_t p = 0; p < v.mask.inside.size(); ++p) {
    const double x2 = static_cast<double>((p / P) % P) * h;
    const double w = std::cos(x2);
    REQUIRE(static_cast<bool>(v.mask.inside[p]) == (std::abs(w) > 0.5));
    if (v.mask.inside[p]) {
      REQUIRE_THAT(v.zeta->values[2][p], WithinAbs(w > 0 ? 1.0 : -1.0, 1e-12));
      REQUIRE_THAT(v.zeta->values[0][p], WithinAbs(0.0, 1e-12));
    }
  }
  CHECK(vorticity_direction(u, 1.5).mask.count() == 0);

  SECTION("unit zeta and nested masks") {
    const auto flow = abc_flow(g, 1.0, 0.7, 0.4);
    std::size_t previous = SIZE_MAX;
    for (double sigma : {0.2, 0.6, 1.0, 1.4}) {
      const auto dir = vorticity_direction(flow, sigma);
      CHECK(dir.mask.count() <= previous);
      previous = dir.mask.count();
      for (std::size_t p = 0; p < dir.mask.inside.size(); ++p) {
        if (!dir.mask.inside[p]) continue;
        double n2 = 0.0;
        for (const auto& c : dir.zeta->values) n2 += c[p] * c[p];
        REQUIRE_THAT(std::sqrt(n2), WithinAbs(1.0, 1e-12));
      }
    }
  }
  SECTION("2D is not applicable") {
    const auto g2 = make_grid(2, 16);
    const auto r = vorticity_direction(taylor_green(g2, 1.0), 0.5);
    CHECK_FALSE(r.applicable);
    CHECK_FALSE(r.zeta.has_value());
    CHECK(r.omega.components() == 1);
    CHECK_THAT(r.max_vorticity, WithinAbs(2.0, 1e-6));
  }
}

TEST_CASE("modulus of continuity", "[diagnostics]") {
  const auto g = make_grid(2, 16);
  SECTION("constant field") {
    const auto f = sample(VectorField::constant(g, std::vector<double>{0.3, 0.4}), 16);
    const auto eta = modulus_of_continuity(f, Mask::full(2, 16));
    REQUIRE_FALSE(eta.empty());
    for (const auto& s : eta) CHECK(s.eta == 0.0);
  }
  SECTION("rotating director against brute force") {
    const auto d = fn(g, 3, [](auto x, auto out) {
      out[0] = std::cos(x[0]);
      out[1] = std::sin(x[0]);
      out[2] = 0.0;
    });
    const auto s = sample(d, 16);
    const auto eta = modulus_of_continuity(s, Mask::full(2, 16));
    CHECK(monotone(eta));
    std::vector<double> radii;
    for (const auto& e : eta) radii.push_back(e.r);
    const auto brute = oracle::brute_force_modulus(s, radii);
    for (std::size_t i = 0; i < eta.size(); ++i) {
      CHECK(eta[i].eta <= eta[i].r * (1 + 1e-12));
      CHECK_THAT(eta[i].eta, WithinAbs(brute[i], 1e-14));
    }
  }
  SECTION("two-point mask") {
    SampledField f{2, 16, 2 * pi, {std::vector<double>(256, 0.0)}};
    f.values[0][17] = 0.3;
    Mask m{2, 16, std::vector<std::uint8_t>(256, 0)};
    m.inside[17] = 1;
    m.inside[100] = 1;
    const auto eta = modulus_of_continuity(f, m);
    REQUIRE(eta.size() == 1);
    CHECK_THAT(eta[0].eta, WithinAbs(0.3, 1e-15));
  }
  SECTION("empty mask") {
    SampledField f{2, 16, 2 * pi, {std::vector<double>(256, 1.0)}};
    CHECK(modulus_of_continuity(f, Mask{2, 16, std::vector<std::uint8_t>(256, 0)}).empty());
  }
  SECTION("subsampled regime stays monotone and below the exact value") {
    const auto g3 = make_grid(3, 16);
    const auto f = sample(abc_flow(g3, 1.0, 0.5, 0.2), 16);
    ModulusOptions opts;
    opts.sampled_pairs = 200000;
    const auto eta = modulus_of_continuity(f, Mask::full(3, 16), opts);
    CHECK(monotone(eta));
    CHECK(eta.back().eta <= 2.0 * (1.0 + 0.5 + 0.2));
  }
}

TEST_CASE("type-I rate", "[diagnostics]") {
  std::vector<std::pair<double, double>> exact, bounded, super;
  for (int i = 0; i < 30; ++i) {
    const double t = -std::pow(0.7, i);
    exact.emplace_back(t, std::pow(-t, -0.5));
    bounded.emplace_back(t, 3.0);
    super.emplace_back(t, 1.0 / (-t));
  }
  const auto a = type_one_rate(exact, 0.0);
  CHECK_THAT(a.C_est, WithinAbs(1.0, 1e-12));
  CHECK(a.classification == BlowupClass::type_one_consistent);
  CHECK(type_one_rate(bounded, 0.0).classification == BlowupClass::bounded);
  CHECK(type_one_rate(super, 0.0).classification == BlowupClass::super_type_one);
  CHECK_THROWS_AS(type_one_rate(exact, -0.5), InvalidArgument);
  CHECK(to_string(BlowupClass::super_type_one) == "super-type-I");
}

TEST_CASE("blow-up window configuration", "[diagnostics]") {
  CHECK_NOTHROW(BlowupWindowConfig(0.5, 4.0, 6.0));
  CHECK_NOTHROW(BlowupWindowConfig(0.5, 2.0, INFINITY));
  CHECK_THROWS_AS(BlowupWindowConfig(0.5, 2.0, 6.0), InvalidArgument);
  CHECK_THROWS_AS(BlowupWindowConfig(0.5, 1.5, 100.0), InvalidArgument);
  CHECK_THROWS_AS(BlowupWindowConfig(0.5, INFINITY, 6.0), InvalidArgument);
  CHECK_THROWS_AS(BlowupWindowConfig(-1.0, 4.0, 6.0), InvalidArgument);
}

TEST_CASE("direction gradient integral", "[diagnostics]") {
  const auto g = make_grid(3, 16);
  const BlowupWindowConfig cfg(0.3, 4.0, 6.0);

  SECTION("constant direction") {
    SampledField zeta{3, 16, 2 * pi, {std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0),
                                      std::vector<double>(g.size(), 1.0)}};
    CHECK(direction_gradient_norm(zeta, Mask::full(3, 16), 6.0, g) <= 1e-13);
  }
  SECTION("empty mask") {
    const auto u = abc_flow(g, 1.0, 1.0, 1.0);
    const auto d = VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
    const auto traj = Trajectory::constant(StatePair(u, d, 0.0), 0.0, 1.0, 4);
    CHECK(direction_gradient_integral(traj, BlowupWindowConfig(100.0, 4.0, 6.0)).value() == 0.0);
  }
  SECTION("2D has no value") {
    const auto g2 = make_grid(2, 16);
    const auto d = VectorField::constant(g2, std::vector<double>{0, 0, 1}, FieldRole::director);
    const auto traj = Trajectory::constant(StatePair(taylor_green(g2, 1.0), d, 0.0), 0.0, 1.0, 4);
    CHECK_FALSE(direction_gradient_integral(traj, cfg).has_value());
  }
  SECTION("invariant under a quarter turn") {
    const auto u = abc_flow(g, 1.0, 0.7, 0.4);
    const auto d = VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
    const auto a = Trajectory::constant(StatePair(u, d, 0.0), 0.0, 0.5, 3);
    const auto b = Trajectory::constant(StatePair(quarter_turn(u), d, 0.0), 0.0, 0.5, 3);
    const double va = direction_gradient_integral(a, cfg).value();
    const double vb = direction_gradient_integral(b, cfg).value();
    CHECK(va > 0.0);
    CHECK_THAT(vb, WithinRel(va, 1e-10));
  }
}

TEST_CASE("report assembly", "[diagnostics]") {
  const auto g = make_grid(2, 16);
  const auto d0 = VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
  const auto r = march(taylor_green(g, 1.0), d0, 0.2, SolverConfig{});
  const auto report = build_report(r.trajectory, DiagnosticsConfig{});
  CHECK(report.norms.size() == r.trajectory.size());
  for (std::size_t i = 0; i < report.norms.size(); ++i) CHECK(report.norms[i].t == r.trajectory.state(i).t);
  CHECK_FALSE(report.vorticity_applicable);
  CHECK_FALSE(report.direction_gradient_integral.has_value());
  CHECK(report.eta_director.size() == r.trajectory.window_count() + 1);
  CHECK(report.t_blow > r.trajectory.t_end());
  CHECK(report.type_one.classification == BlowupClass::bounded);
}
