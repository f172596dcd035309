#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mildflow/field.hpp"

namespace mildflow {

/// Named velocity families. All are periodic on the grid's torus and
/// divergence-free; `amplitude` is the sup norm of the field unless noted.
struct VelocitySpec {
  /// zero | taylor_green | single_mode | random_band | beltrami | snapshot
  std::string family = "zero";
  double amplitude = 1.0;
  /// single_mode: integer wavevector; its sine mode is polarised along
  /// `polarization` projected orthogonally to the wavevector.
  std::vector<int> wavevector;
  std::vector<double> polarization;
  /// random_band: modes with band_min <= |k| <= band_max (integer units).
  double band_min = 1.0;
  double band_max = 4.0;
  /// beltrami: ABC flow coefficients (A, B, C); amplitude multiplies them.
  std::vector<double> abc{1.0, 1.0, 1.0};
  std::filesystem::path path;
};

/// Named director families.
struct DirectorSpec {
  /// constant | geodesic_director | random_band | snapshot
  std::string family = "constant";
  std::vector<double> value{0.0, 0.0, 1.0};
  /// geodesic_director: d = (cos th, sin th, 0) with th = amplitude * sin(k . x).
  /// random_band: th is a random band-limited angle with sup |th| = amplitude.
  double amplitude = 0.1;
  std::vector<int> wavevector;
  double band_min = 1.0;
  double band_max = 4.0;
  std::filesystem::path path;
};

VectorField make_velocity(const SpectralGrid& grid, const VelocitySpec& spec, std::uint64_t seed);
VectorField make_director(const SpectralGrid& grid, const DirectorSpec& spec, std::uint64_t seed);

/// u = A (cos x1 sin x2, -sin x1 cos x2) in 2D; in 3D the same with a cos x3
/// factor and zero third component. Coordinates are scaled by 2 pi / L.
VectorField taylor_green(const SpectralGrid& grid, double amplitude);

/// d = (cos th, sin th, 0) for th sampled on the grid.
VectorField director_from_angle(const SpectralGrid& grid, const std::vector<double>& theta);

}  // namespace mildflow
