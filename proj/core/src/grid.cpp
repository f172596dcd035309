#include "mildflow/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "mildflow/error.hpp"

namespace mildflow {
namespace detail {

// Wavenumber tables and FFTW plans for one (dimension, points) pair. Shared
// by every grid with that shape, regardless of period.
struct GridLayout {
  int dimension = 0;
  int points = 0;
  std::size_t size = 0;
  std::vector<int> axis_k;
  std::vector<int> k2;
  std::vector<int> distinct_k2;
  std::vector<std::size_t> k2_class;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  GridLayout() = default;
  GridLayout(const GridLayout&) = delete;
  GridLayout& operator=(const GridLayout&) = delete;
  ~GridLayout() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int axis_wavenumber(int i, int points) { return 2 * i < points ? i : i - points; }

std::shared_ptr<const GridLayout> build_layout(int dimension, int points) {
  auto layout = std::make_shared<GridLayout>();
  layout->dimension = dimension;
  layout->points = points;
  std::size_t size = 1;
  for (int a = 0; a < dimension; ++a) size *= static_cast<std::size_t>(points);
  layout->size = size;

  layout->axis_k.resize(points);
  for (int i = 0; i < points; ++i) layout->axis_k[i] = axis_wavenumber(i, points);

  layout->k2.resize(size);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t rest = idx;
    int k2 = 0;
    for (int a = dimension - 1; a >= 0; --a) {
      const int k = layout->axis_k[rest % points];
      rest /= points;
      k2 += k * k;
    }
    layout->k2[idx] = k2;
  }
  layout->distinct_k2 = layout->k2;
  std::sort(layout->distinct_k2.begin(), layout->distinct_k2.end());
  layout->distinct_k2.erase(std::unique(layout->distinct_k2.begin(), layout->distinct_k2.end()),
                            layout->distinct_k2.end());
  layout->k2_class.resize(size);
  for (std::size_t idx = 0; idx < size; ++idx) {
    layout->k2_class[idx] = static_cast<std::size_t>(
        std::lower_bound(layout->distinct_k2.begin(), layout->distinct_k2.end(), layout->k2[idx]) -
        layout->distinct_k2.begin());
  }

  std::vector<int> dims(dimension, points);
  auto* in = fftw_alloc_complex(size);
  auto* out = fftw_alloc_complex(size);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    layout->forward = fftw_plan_dft(dimension, dims.data(), in, out, FFTW_FORWARD, flags);
    layout->backward = fftw_plan_dft(dimension, dims.data(), in, out, FFTW_BACKWARD, flags);
  }
  fftw_free(in);
  fftw_free(out);
  if (!layout->forward || !layout->backward) throw Error("FFTW planning failed");
  return layout;
}

std::shared_ptr<const GridLayout> layout_for(int dimension, int points) {
  static std::mutex registry_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const GridLayout>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[{dimension, points}];
  if (!slot) slot = build_layout(dimension, points);
  return slot;
}

}  // namespace
}  // namespace detail

SpectralGrid::SpectralGrid(int dimension, int modes_per_axis, double period)
    : SpectralGrid(dimension, modes_per_axis, period, true) {}

SpectralGrid::SpectralGrid(int dimension, int modes_per_axis, double period, bool validate)
    : dimension_(dimension), modes_(modes_per_axis), period_(period) {
  if (dimension != 2 && dimension != 3) {
    throw InvalidArgument("dimension must be 2 or 3, got " + std::to_string(dimension));
  }
  if (validate) {
    if (modes_per_axis % 2 != 0) throw InvalidArgument("resolution must be even");
    if (modes_per_axis < 8) throw InvalidArgument("resolution must be at least 8");
  } else if (modes_per_axis < 1) {
    throw InvalidArgument("resampling needs at least one point per axis");
  }
  if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("period must be positive");
  layout_ = detail::layout_for(dimension, modes_per_axis);
  size_ = layout_->size;
}

SpectralGrid make_grid(int dimension, int modes_per_axis, double period) {
  return SpectralGrid(dimension, modes_per_axis, period);
}

std::span<const int> SpectralGrid::axis_wavenumbers() const { return layout_->axis_k; }

int SpectralGrid::wavenumber(std::size_t index, int axis) const {
  std::size_t stride = 1;
  for (int a = dimension_ - 1; a > axis; --a) stride *= modes_;
  return layout_->axis_k[(index / stride) % modes_];
}

int SpectralGrid::wavenumber_squared(std::size_t index) const { return layout_->k2[index]; }

bool SpectralGrid::is_nyquist(std::size_t index) const {
  if (modes_ % 2 != 0) return false;
  for (int a = 0; a < dimension_; ++a) {
    if (wavenumber(index, a) == -modes_ / 2) return true;
  }
  return false;
}

std::size_t SpectralGrid::index_of(std::span<const int> k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dimension_; ++a) {
    int i = k[a] < 0 ? k[a] + modes_ : k[a];
    if (i < 0 || i >= modes_) throw InvalidArgument("wavenumber outside the grid");
    idx = idx * modes_ + static_cast<std::size_t>(i);
  }
  return idx;
}

double SpectralGrid::coordinate(std::size_t index, int axis) const {
  std::size_t stride = 1;
  for (int a = dimension_ - 1; a > axis; --a) stride *= modes_;
  return spacing() * static_cast<double>((index / stride) % modes_);
}

std::span<const int> SpectralGrid::distinct_wavenumber_squares() const {
  return layout_->distinct_k2;
}

std::size_t SpectralGrid::wavenumber_class(std::size_t index) const {
  return layout_->k2_class[index];
}

SpectralGrid SpectralGrid::resampled(int points) const {
  return SpectralGrid(dimension_, points, period_, false);
}

void SpectralGrid::forward(std::span<const double> physical, std::span<Complex> spectral) const {
  std::vector<Complex> buffer(physical.begin(), physical.end());
  forward(buffer, spectral);
}

void SpectralGrid::forward(std::span<const Complex> physical, std::span<Complex> spectral) const {
  if (physical.size() != size_ || spectral.size() != size_) {
    throw GridMismatch("transform buffer size does not match grid");
  }
  // FFTW's new-array execute never writes the input for out-of-place plans.
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(physical.data()));
  auto* out = reinterpret_cast<fftw_complex*>(spectral.data());
  if (physical.data() == spectral.data()) {
    std::vector<Complex> copy(physical.begin(), physical.end());
    fftw_execute_dft(layout_->forward, reinterpret_cast<fftw_complex*>(copy.data()), out);
  } else {
    fftw_execute_dft(layout_->forward, in, out);
  }
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& c : spectral) c *= scale;
}

void SpectralGrid::inverse(std::span<const Complex> spectral, std::span<Complex> physical) const {
  if (physical.size() != size_ || spectral.size() != size_) {
    throw GridMismatch("transform buffer size does not match grid");
  }
  auto* out = reinterpret_cast<fftw_complex*>(physical.data());
  if (physical.data() == spectral.data()) {
    std::vector<Complex> copy(spectral.begin(), spectral.end());
    fftw_execute_dft(layout_->backward, reinterpret_cast<fftw_complex*>(copy.data()), out);
  } else {
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(spectral.data()));
    fftw_execute_dft(layout_->backward, in, out);
  }
}

void SpectralGrid::inverse(std::span<const Complex> spectral, std::span<double> physical) const {
  std::vector<Complex> buffer(size_);
  inverse(spectral, buffer);
  if (physical.size() != size_) throw GridMismatch("transform buffer size does not match grid");
  for (std::size_t i = 0; i < size_; ++i) physical[i] = buffer[i].real();
}

}  // namespace mildflow
