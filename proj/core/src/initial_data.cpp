#include "mildflow/initial_data.hpp"

#include <cmath>
#include <random>

#include "mildflow/error.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/snapshot.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

double scaled(const SpectralGrid& grid, double x) { return grid.wavenumber_scale() * x; }

// Random coefficients on the shell band_min <= |k| <= band_max, conjugate
// symmetry restored by taking the real part of the inverse transform.
std::vector<double> random_band_samples(const SpectralGrid& grid, double band_min, double band_max,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> spec(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double k = std::sqrt(static_cast<double>(grid.wavenumber_squared(idx)));
    const double re = normal(rng);
    const double im = normal(rng);
    if (k >= band_min && k <= band_max && !grid.is_nyquist(idx)) spec[idx] = Complex(re, im);
  }
  std::vector<double> out(grid.size());
  grid.inverse(spec, out);
  return out;
}

VectorField rescale_to_sup(VectorField f, double target) {
  const double s = sup_norm(f);
  if (s == 0.0) throw InvalidArgument("random band produced a zero field; widen the band");
  f *= target / s;
  return f;
}

void require_size(const std::vector<int>& k, int dimension, const char* what) {
  if (k.size() != static_cast<std::size_t>(dimension)) {
    throw InvalidArgument(std::string(what) + " needs one entry per axis");
  }
}

}  // namespace

VectorField taylor_green(const SpectralGrid& grid, double amplitude) {
  const int n = grid.dimension();
  return VectorField::from_function(
      grid, n,
      [&](std::span<const double> x, std::span<double> out) {
        const double x1 = scaled(grid, x[0]);
        const double x2 = scaled(grid, x[1]);
        const double z = n == 3 ? std::cos(scaled(grid, x[2])) : 1.0;
        out[0] = amplitude * std::cos(x1) * std::sin(x2) * z;
        out[1] = -amplitude * std::sin(x1) * std::cos(x2) * z;
        if (n == 3) out[2] = 0.0;
      },
      FieldRole::velocity);
}

VectorField director_from_angle(const SpectralGrid& grid, const std::vector<double>& theta) {
  std::vector<VectorField::Samples> comps(3, VectorField::Samples(grid.size()));
  for (std::size_t x = 0; x < grid.size(); ++x) {
    comps[0][x] = std::cos(theta[x]);
    comps[1][x] = std::sin(theta[x]);
  }
  return VectorField::from_physical(grid, std::move(comps), FieldRole::director);
}

VectorField make_velocity(const SpectralGrid& grid, const VelocitySpec& spec, std::uint64_t seed) {
  const int n = grid.dimension();
  const auto& f = spec.family;
  if (f == "zero") return VectorField(grid, n, FieldRole::velocity);
  if (f == "taylor_green") return taylor_green(grid, spec.amplitude);
  if (f == "single_mode") {
    require_size(spec.wavevector, n, "single_mode wavevector");
    std::vector<double> k(spec.wavevector.begin(), spec.wavevector.end());
    double kk = 0.0;
    for (double v : k) kk += v * v;
    if (kk == 0.0) throw InvalidArgument("single_mode wavevector must be nonzero");
    std::vector<double> p = spec.polarization;
    if (p.empty()) {
      // Default: rotate k by 90 degrees in its first two axes.
      p.assign(n, 0.0);
      p[0] = -k[1];
      p[1] = k[0];
      if (p[0] == 0.0 && p[1] == 0.0) p[0] = 1.0;
    }
    if (p.size() != static_cast<std::size_t>(n)) throw InvalidArgument("polarization needs one entry per axis");
    double pk = 0.0;
    for (int a = 0; a < n; ++a) pk += p[a] * k[a];
    double pp = 0.0;
    for (int a = 0; a < n; ++a) {
      p[a] -= pk / kk * k[a];
      pp += p[a] * p[a];
    }
    if (pp == 0.0) throw InvalidArgument("polarization is parallel to the wavevector");
    for (double& v : p) v /= std::sqrt(pp);
    return VectorField::from_function(
        grid, n,
        [&](std::span<const double> x, std::span<double> out) {
          double phase = 0.0;
          for (int a = 0; a < n; ++a) phase += k[a] * scaled(grid, x[a]);
          for (int a = 0; a < n; ++a) out[a] = spec.amplitude * p[a] * std::sin(phase);
        },
        FieldRole::velocity);
  }
  if (f == "random_band") {
    std::mt19937_64 rng(seed);
    std::vector<VectorField::Samples> comps;
    for (int a = 0; a < n; ++a) comps.push_back(random_band_samples(grid, spec.band_min, spec.band_max, rng));
    auto u = leray_project(VectorField::from_physical(grid, std::move(comps), FieldRole::velocity));
    u = VectorField(grid, u.spectra(), FieldRole::velocity);
    if (spec.amplitude == 0.0) return VectorField(grid, n, FieldRole::velocity);
    return rescale_to_sup(std::move(u), spec.amplitude);
  }
  if (f == "beltrami") {
    if (n != 3) throw InvalidArgument("beltrami flow needs a 3D grid");
    if (spec.abc.size() != 3) throw InvalidArgument("beltrami abc needs three coefficients");
    const double A = spec.amplitude * spec.abc[0];
    const double B = spec.amplitude * spec.abc[1];
    const double C = spec.amplitude * spec.abc[2];
    return VectorField::from_function(
        grid, 3,
        [&](std::span<const double> x, std::span<double> out) {
          const double x1 = scaled(grid, x[0]);
          const double x2 = scaled(grid, x[1]);
          const double x3 = scaled(grid, x[2]);
          out[0] = A * std::sin(x3) + C * std::cos(x2);
          out[1] = B * std::sin(x1) + A * std::cos(x3);
          out[2] = C * std::sin(x2) + B * std::cos(x1);
        },
        FieldRole::velocity);
  }
  if (f == "snapshot") {
    auto u = read_snapshot(spec.path, grid.period());
    if (!(u.grid() == grid)) throw GridMismatch("velocity snapshot grid differs from the scenario grid");
    if (u.components() != static_cast<std::size_t>(n)) {
      throw InvalidArgument("velocity snapshot must have one component per axis");
    }
    return u.with_role(FieldRole::velocity);
  }
  throw InvalidArgument("unknown velocity family '" + f + "'");
}

VectorField make_director(const SpectralGrid& grid, const DirectorSpec& spec, std::uint64_t seed) {
  const int n = grid.dimension();
  const auto& f = spec.family;
  if (f == "constant") {
    if (spec.value.size() != 3) throw InvalidArgument("constant director needs three components");
    return VectorField::constant(grid, spec.value, FieldRole::director);
  }
  if (f == "geodesic_director") {
    std::vector<int> k = spec.wavevector;
    if (k.empty()) {
      k.assign(n, 0);
      k[0] = 1;
    }
    require_size(k, n, "geodesic_director wavevector");
    std::vector<double> theta(grid.size());
    for (std::size_t x = 0; x < grid.size(); ++x) {
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += k[a] * scaled(grid, grid.coordinate(x, a));
      theta[x] = spec.amplitude * std::sin(phase);
    }
    return director_from_angle(grid, theta);
  }
  if (f == "random_band") {
    // Offset the stream so velocity and director draws are independent.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto theta = random_band_samples(grid, spec.band_min, spec.band_max, rng);
    double peak = 0.0;
    for (double v : theta) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw InvalidArgument("random band produced a zero angle; widen the band");
    for (double& v : theta) v *= spec.amplitude / peak;
    return director_from_angle(grid, theta);
  }
  if (f == "snapshot") {
    auto d = read_snapshot(spec.path, grid.period());
    if (!(d.grid() == grid)) throw GridMismatch("director snapshot grid differs from the scenario grid");
    if (d.components() != 3) throw InvalidArgument("director snapshot must have three components");
    return d.with_role(FieldRole::director);
  }
  throw InvalidArgument("unknown director family '" + f + "'");
}

}  // namespace mildflow
