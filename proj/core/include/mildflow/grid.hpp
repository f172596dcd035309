#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace mildflow {

using Complex = std::complex<double>;

namespace detail {
struct GridLayout;
}

/// Uniform periodic grid on [0, L)^n with N modes per axis.
///
/// Modes are stored in FFT order: axis index i maps to integer wavenumber
/// i for i < N/2 and i - N otherwise, so every axis carries wavenumbers
/// [-N/2, N/2). Flat indices are row-major with the last axis fastest, the
/// same order used for physical samples.
class SpectralGrid {
 public:
  SpectralGrid(int dimension, int modes_per_axis, double period);

  int dimension() const noexcept { return dimension_; }
  int modes_per_axis() const noexcept { return modes_; }
  double period() const noexcept { return period_; }
  /// 2*pi / L, the factor turning integer wavenumbers into physical ones.
  double wavenumber_scale() const noexcept { return 2.0 * std::numbers::pi / period_; }
  double spacing() const noexcept { return period_ / modes_; }
  std::size_t size() const noexcept { return size_; }

  /// Integer wavenumbers of one axis, in storage order.
  std::span<const int> axis_wavenumbers() const;
  /// Integer wavenumber of flat mode `index` along `axis`.
  int wavenumber(std::size_t index, int axis) const;
  /// Integer |k|^2 of flat mode `index`.
  int wavenumber_squared(std::size_t index) const;
  /// Physical |k|^2 of flat mode `index`.
  double laplacian_eigenvalue(std::size_t index) const {
    const double s = wavenumber_scale();
    return s * s * wavenumber_squared(index);
  }
  /// True when the mode sits on the unpaired -N/2 wavenumber of some axis.
  bool is_nyquist(std::size_t index) const;
  /// Flat index of the mode with the given integer wavenumbers (each in [-N/2, N/2)).
  std::size_t index_of(std::span<const int> k) const;

  /// Coordinate of collocation point `index` along `axis`.
  double coordinate(std::size_t index, int axis) const;

  /// Distinct values of integer |k|^2 over all modes, ascending.
  std::span<const int> distinct_wavenumber_squares() const;
  /// Position of mode `index`'s |k|^2 inside distinct_wavenumber_squares().
  std::size_t wavenumber_class(std::size_t index) const;

  /// Same domain with `points` samples per axis (used for oversampling).
  SpectralGrid resampled(int points) const;

  /// Forward transform: physical samples -> normalized coefficients
  /// (f = sum_k fhat(k) e^{i k.x}).
  void forward(std::span<const double> physical, std::span<Complex> spectral) const;
  void forward(std::span<const Complex> physical, std::span<Complex> spectral) const;
  /// Inverse transform, keeping the real part.
  void inverse(std::span<const Complex> spectral, std::span<double> physical) const;
  void inverse(std::span<const Complex> spectral, std::span<Complex> physical) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) noexcept {
    return a.dimension_ == b.dimension_ && a.modes_ == b.modes_ && a.period_ == b.period_;
  }

 private:
  SpectralGrid(int dimension, int modes_per_axis, double period, bool validate);

  int dimension_;
  int modes_;
  double period_;
  std::size_t size_;
  std::shared_ptr<const detail::GridLayout> layout_;
};

/// Validated construction; see SpectralGrid for the layout.
SpectralGrid make_grid(int dimension, int modes_per_axis,
                       double period = 2.0 * std::numbers::pi);

}  // namespace mildflow
