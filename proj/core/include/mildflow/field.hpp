#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "mildflow/grid.hpp"

namespace mildflow {

enum class FieldRole : std::uint8_t { generic = 0, velocity = 1, director = 2 };

std::string_view to_string(FieldRole role);

/// An n-component periodic field.
///
/// Spectral coefficients are the primary representation. Physical samples
/// are materialized lazily on first request and cached; the cache is shared
/// between copies and populated at most once. A field constructed from
/// physical samples keeps those samples verbatim as its cache, so reading a
/// snapshot back reproduces the stored bits.
class VectorField {
 public:
  using Spectrum = std::vector<Complex>;
  using Samples = std::vector<double>;
  /// Writes the component values at point x into `out`.
  using PointFunction = std::function<void(std::span<const double> x, std::span<double> out)>;

  VectorField(SpectralGrid grid, std::size_t components, FieldRole role = FieldRole::generic);
  VectorField(SpectralGrid grid, std::vector<Spectrum> spectra, FieldRole role = FieldRole::generic);

  static VectorField from_physical(SpectralGrid grid, std::vector<Samples> samples,
                                   FieldRole role = FieldRole::generic);
  static VectorField from_function(SpectralGrid grid, std::size_t components,
                                   const PointFunction& f, FieldRole role = FieldRole::generic);
  /// Constant field with the given component values.
  static VectorField constant(SpectralGrid grid, std::span<const double> value,
                              FieldRole role = FieldRole::generic);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return spectra_.size(); }
  FieldRole role() const noexcept { return role_; }
  VectorField with_role(FieldRole role) const;

  std::span<const Complex> spectral(std::size_t c) const { return spectra_.at(c); }
  const std::vector<Spectrum>& spectra() const noexcept { return spectra_; }
  /// Mutable access to one component's coefficients; drops the physical cache.
  std::span<Complex> spectral_mut(std::size_t c);

  /// Physical samples of one component on the native collocation grid.
  const Samples& physical(std::size_t c) const;
  /// True once the physical cache exists (for tests of the lazy contract).
  bool has_physical_cache() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<Samples> samples;
  };

  void reset_cache();

  SpectralGrid grid_;
  std::vector<Spectrum> spectra_;
  FieldRole role_;
  mutable std::shared_ptr<Cache> cache_;
};

/// rows x cols tensor field stored as a VectorField with rows*cols
/// components; entry (r, c) is component r*cols + c.
class TensorField {
 public:
  TensorField(std::size_t rows, std::size_t cols, VectorField data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t entry(std::size_t r, std::size_t c) const noexcept { return r * cols_ + c; }
  const VectorField& data() const noexcept { return data_; }
  const SpectralGrid& grid() const noexcept { return data_.grid(); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  VectorField data_;
};

/// The velocity/director pair at one time.
struct StatePair {
  VectorField u;
  VectorField d;
  double t = 0.0;

  StatePair(VectorField velocity, VectorField director, double time);
};

/// Throws GridMismatch unless both fields live on the same grid.
void require_same_grid(const VectorField& a, const VectorField& b);

}  // namespace mildflow
