#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>

#include "mildflow/error.hpp"
#include "mildflow/nonlinear.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/snapshot.hpp"
#include "mildflow/spectral.hpp"
#include "oracles.hpp"

using namespace mildflow;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

VectorField fn(const SpectralGrid& grid, std::size_t comps, VectorField::PointFunction f,
               FieldRole role = FieldRole::generic) {
  return VectorField::from_function(grid, comps, f, role);
}

VectorField rotating_director(const SpectralGrid& g) {
  return fn(
      g, 3,
      [](auto x, auto out) {
        out[0] = std::cos(x[0]);
        out[1] = std::sin(x[0]);
        out[2] = 0.0;
      },
      FieldRole::director);
}

VectorField e3(const SpectralGrid& g) {
  return VectorField::constant(g, std::vector<double>{0, 0, 1}, FieldRole::director);
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mildflow_test_fields";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("field representations", "[fields]") {
  const auto g = make_grid(2, 16);
  const auto f = fn(g, 2, [](auto x, auto out) {
    out[0] = std::sin(x[0]) * std::cos(2 * x[1]);
    out[1] = 0.25;
  });
  CHECK(f.has_physical_cache());

  VectorField spectral_only(g, f.spectra());
  CHECK_FALSE(spectral_only.has_physical_cache());
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE_THAT(spectral_only.physical(c)[i], WithinAbs(f.physical(c)[i], 1e-14));
    }
  }
  CHECK(spectral_only.has_physical_cache());

  auto copy = spectral_only;
  copy.spectral_mut(1)[0] = 2.0;
  CHECK_FALSE(copy.has_physical_cache());
  CHECK_THAT(copy.physical(1)[5], WithinAbs(2.0, 1e-15));
  CHECK_THAT(spectral_only.physical(1)[5], WithinAbs(0.25, 1e-15));
}

TEST_CASE("role shape checks", "[fields]") {
  const auto g = make_grid(3, 8);
  CHECK_THROWS_AS(VectorField(g, 2, FieldRole::velocity), InvalidArgument);
  CHECK_THROWS_AS(VectorField(g, 2, FieldRole::director), InvalidArgument);
  const auto g2 = make_grid(2, 8);
  CHECK_NOTHROW(VectorField(g2, 3, FieldRole::director));
  CHECK_THROWS_AS(require_same_grid(VectorField(g, 1), VectorField(g2, 1)), GridMismatch);
}

TEST_CASE("momentum nonlinearity", "[fields][nonlinear]") {
  const auto g = make_grid(2, 64);
  const VectorField zero(g, 2, FieldRole::velocity);
  CHECK(sup_norm(momentum_nonlinearity(zero, e3(g))) == 0.0);
  CHECK(sup_norm(momentum_nonlinearity(zero, rotating_director(g))) <= 1e-13);

  SECTION("Taylor-Green convection against refined finite differences") {
    const auto u = fn(
        g, 2,
        [](auto x, auto out) {
          out[0] = std::cos(x[0]) * std::sin(x[1]);
          out[1] = -std::sin(x[0]) * std::cos(x[1]);
        },
        FieldRole::velocity);
    const auto m = momentum_nonlinearity(u, e3(g));
    // div(u (x) u) by 4th-order differences on a 16x finer grid.
    const int refine = 16;
    const auto fine = make_grid(2, 64 * refine);
    std::vector<std::vector<double>> flux(4, std::vector<double>(fine.size()));
    for (std::size_t p = 0; p < fine.size(); ++p) {
      const double x0 = fine.coordinate(p, 0);
      const double x1 = fine.coordinate(p, 1);
      const double u0 = std::cos(x0) * std::sin(x1);
      const double u1 = -std::sin(x0) * std::cos(x1);
      flux[0][p] = u0 * u0;
      flux[1][p] = u0 * u1;
      flux[2][p] = u1 * u0;
      flux[3][p] = u1 * u1;
    }
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const auto a = oracle::fd4_derivative(flux[2 * i + 0], fine, 0);
      const auto b = oracle::fd4_derivative(flux[2 * i + 1], fine, 1);
      for (std::size_t p = 0; p < g.size(); ++p) {
        const std::size_t r = p / 64, c = p % 64;
        const std::size_t q = (r * refine) * fine.modes_per_axis() + c * refine;
        err = std::max(err, std::abs(m.physical(i)[p] - (a[q] + b[q])));
      }
    }
    CHECK(err <= 1e-8);
  }

  SECTION("total divergence has no mean and scales quadratically") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    std::vector<VectorField::Samples> s(2, VectorField::Samples(g.size()));
    for (auto& c : s) {
      for (double& v : c) v = normal(rng);
    }
    const auto u = VectorField(g, leray_project(heat_semigroup(VectorField::from_physical(g, s), 0.02)).spectra(),
                               FieldRole::velocity);
    const auto d = fn(
        g, 3,
        [](auto x, auto out) {
          out[0] = std::cos(std::sin(x[1]));
          out[1] = std::sin(std::sin(x[1]));
          out[2] = 0.1 * std::cos(x[0]);
        },
        FieldRole::director);
    const auto m = momentum_nonlinearity(u, d);
    for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(m.spectral(c)[0]) <= 1e-12);

    const auto m_u = momentum_nonlinearity(u, e3(g));
    CHECK(sup_norm(momentum_nonlinearity(2.0 * u, e3(g)) - 4.0 * m_u) <= 1e-12 * sup_norm(m_u));
    const auto m_d = momentum_nonlinearity(zero, d);
    const auto d2 = (2.0 * d).with_role(FieldRole::director);
    CHECK(sup_norm(momentum_nonlinearity(zero, d2) - 4.0 * m_d) <= 1e-12 * sup_norm(m_d));
  }
}

TEST_CASE("director nonlinearity", "[fields][nonlinear]") {
  const auto g = make_grid(2, 32);
  const VectorField zero(g, 2, FieldRole::velocity);
  const auto shear = fn(
      g, 2,
      [](auto x, auto out) {
        out[0] = std::sin(x[1]);
        out[1] = 0.0;
      },
      FieldRole::velocity);
  CHECK(sup_norm(director_nonlinearity(shear, e3(g))) <= 1e-14);

  const auto d = rotating_director(g);
  CHECK(sup_norm(director_nonlinearity(zero, d) - d) <= 1e-12);

  const auto e1 = VectorField::constant(g, std::vector<double>{1.0, 0.0}, FieldRole::velocity);
  const auto expected = fn(g, 3, [](auto x, auto out) {
    out[0] = std::cos(x[0]) + std::sin(x[0]);
    out[1] = std::sin(x[0]) - std::cos(x[0]);
    out[2] = 0.0;
  });
  for (auto mode : {DealiasMode::two_thirds, DealiasMode::refined_cubic}) {
    CHECK(sup_norm(director_nonlinearity(e1, d, {mode}) - expected) <= 1e-12);
  }
}

TEST_CASE("MFLD snapshots", "[fields][snapshot]") {
  const auto g = make_grid(3, 8);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<VectorField::Samples> s(3, VectorField::Samples(g.size()));
  for (auto& c : s) {
    for (double& v : c) v = normal(rng);
  }
  const auto f = VectorField::from_physical(g, s, FieldRole::director);

  SECTION("bitwise round trip through a file") {
    const auto path = scratch("field.mfld");
    write_snapshot(f, path);
    const auto back = read_snapshot(path);
    CHECK(back.role() == FieldRole::director);
    CHECK(back.grid() == g);
    for (std::size_t c = 0; c < 3; ++c) CHECK(back.physical(c) == f.physical(c));
  }
  SECTION("header layout") {
    const auto bytes = encode_snapshot(f);
    CHECK(bytes.size() == mfld::kHeaderBytes + 3 * g.size() * 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "MFLD");
    CHECK(bytes[4] == 1);
    CHECK(bytes[6] == 3);
    CHECK(bytes[8] == 8);
    CHECK(bytes[12] == 2);
  }
  SECTION("format errors") {
    auto bytes = encode_snapshot(f);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
    auto future = bytes;
    future[4] = 9;
    CHECK_THROWS_WITH(decode_snapshot(future), ContainsSubstring("unsupported version"));
    auto truncated = bytes;
    truncated.resize(bytes.size() - 5);
    CHECK_THROWS_AS(decode_snapshot(truncated), FormatError);
    CHECK_THROWS_AS(read_snapshot(scratch("missing.mfld")), NotFound);
  }
}
