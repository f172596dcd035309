#include "mildflow/field.hpp"

#include <string>

#include "mildflow/error.hpp"

namespace mildflow {

std::string_view to_string(FieldRole role) {
  switch (role) {
    case FieldRole::generic: return "generic";
    case FieldRole::velocity: return "velocity";
    case FieldRole::director: return "director";
  }
  return "unknown";
}

namespace {

void check_role_shape(const SpectralGrid& grid, std::size_t components, FieldRole role) {
  if (components == 0) throw InvalidArgument("a field needs at least one component");
  if (role == FieldRole::velocity && components != static_cast<std::size_t>(grid.dimension())) {
    throw InvalidArgument("velocity must have one component per spatial dimension");
  }
  if (role == FieldRole::director && components != 3) {
    throw InvalidArgument("director must have exactly 3 components");
  }
}

}  // namespace

VectorField::VectorField(SpectralGrid grid, std::size_t components, FieldRole role)
    : grid_(std::move(grid)), role_(role), cache_(std::make_shared<Cache>()) {
  check_role_shape(grid_, components, role);
  spectra_.assign(components, Spectrum(grid_.size()));
}

VectorField::VectorField(SpectralGrid grid, std::vector<Spectrum> spectra, FieldRole role)
    : grid_(std::move(grid)), spectra_(std::move(spectra)), role_(role),
      cache_(std::make_shared<Cache>()) {
  check_role_shape(grid_, spectra_.size(), role);
  for (const auto& s : spectra_) {
    if (s.size() != grid_.size()) throw GridMismatch("spectrum size does not match grid");
  }
}

VectorField VectorField::from_physical(SpectralGrid grid, std::vector<Samples> samples,
                                       FieldRole role) {
  VectorField f(grid, samples.size(), role);
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (samples[c].size() != grid.size()) throw GridMismatch("sample count does not match grid");
    grid.forward(samples[c], f.spectra_[c]);
  }
  std::call_once(f.cache_->once, [&] { f.cache_->samples = std::move(samples); });
  return f;
}

VectorField VectorField::from_function(SpectralGrid grid, std::size_t components,
                                       const PointFunction& fn, FieldRole role) {
  std::vector<Samples> samples(components, Samples(grid.size()));
  std::vector<double> x(grid.dimension());
  std::vector<double> out(components);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    for (int a = 0; a < grid.dimension(); ++a) x[a] = grid.coordinate(idx, a);
    fn(x, out);
    for (std::size_t c = 0; c < components; ++c) samples[c][idx] = out[c];
  }
  return from_physical(std::move(grid), std::move(samples), role);
}

VectorField VectorField::constant(SpectralGrid grid, std::span<const double> value,
                                  FieldRole role) {
  VectorField f(grid, value.size(), role);
  for (std::size_t c = 0; c < value.size(); ++c) f.spectra_[c][0] = value[c];
  return f;
}

VectorField VectorField::with_role(FieldRole role) const {
  check_role_shape(grid_, components(), role);
  VectorField copy = *this;
  copy.role_ = role;
  return copy;
}

std::span<Complex> VectorField::spectral_mut(std::size_t c) {
  reset_cache();
  return spectra_.at(c);
}

const VectorField::Samples& VectorField::physical(std::size_t c) const {
  std::call_once(cache_->once, [this] {
    cache_->samples.assign(components(), Samples(grid_.size()));
    for (std::size_t k = 0; k < components(); ++k) grid_.inverse(spectra_[k], cache_->samples[k]);
  });
  return cache_->samples.at(c);
}

bool VectorField::has_physical_cache() const { return !cache_->samples.empty(); }

void VectorField::reset_cache() { cache_ = std::make_shared<Cache>(); }

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_grid(*this, other);
  if (other.components() != components()) throw GridMismatch("component count mismatch");
  for (std::size_t c = 0; c < components(); ++c) {
    for (std::size_t i = 0; i < grid_.size(); ++i) spectra_[c][i] += other.spectra_[c][i];
  }
  reset_cache();
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_grid(*this, other);
  if (other.components() != components()) throw GridMismatch("component count mismatch");
  for (std::size_t c = 0; c < components(); ++c) {
    for (std::size_t i = 0; i < grid_.size(); ++i) spectra_[c][i] -= other.spectra_[c][i];
  }
  reset_cache();
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& spec : spectra_) {
    for (auto& v : spec) v *= s;
  }
  reset_cache();
  return *this;
}

TensorField::TensorField(std::size_t rows, std::size_t cols, VectorField data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.components() != rows * cols) throw InvalidArgument("tensor shape mismatch");
}

StatePair::StatePair(VectorField velocity, VectorField director, double time)
    : u(std::move(velocity)), d(std::move(director)), t(time) {
  require_same_grid(u, d);
}

void require_same_grid(const VectorField& a, const VectorField& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
}

}  // namespace mildflow
