#include "mildflow/spectral.hpp"

#include <cmath>
#include <string>

#include "mildflow/error.hpp"

namespace mildflow {

namespace {

constexpr Complex kI{0.0, 1.0};

// i * k_axis (physical), zero on the unpaired Nyquist wavenumber.
Complex derivative_symbol(const SpectralGrid& grid, std::size_t idx, int axis) {
  const int k = grid.wavenumber(idx, axis);
  if (grid.modes_per_axis() % 2 == 0 && k == -grid.modes_per_axis() / 2) return 0.0;
  return kI * (grid.wavenumber_scale() * k);
}

}  // namespace

VectorField heat_semigroup(const VectorField& f, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("heat semigroup needs finite t >= 0");
  VectorField out = f;
  if (t == 0.0) return out;
  const auto& grid = f.grid();
  const auto classes = grid.distinct_wavenumber_squares();
  std::vector<double> factor(classes.size());
  const double s2 = grid.wavenumber_scale() * grid.wavenumber_scale();
  for (std::size_t j = 0; j < classes.size(); ++j) factor[j] = std::exp(-t * s2 * classes[j]);
  for (std::size_t c = 0; c < f.components(); ++c) {
    auto spec = out.spectral_mut(c);
    for (std::size_t i = 0; i < grid.size(); ++i) spec[i] *= factor[grid.wavenumber_class(i)];
  }
  return out;
}

VectorField leray_project(const VectorField& f) {
  const auto& grid = f.grid();
  const int n = grid.dimension();
  if (f.components() != static_cast<std::size_t>(n)) {
    throw GridMismatch("projection needs one component per spatial dimension");
  }
  std::vector<VectorField::Spectrum> spectra = f.spectra();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    // The unpaired Nyquist wavenumber has no real-valued projection.
    if (grid.is_nyquist(i)) {
      for (int a = 0; a < n; ++a) spectra[a][i] = 0.0;
      continue;
    }
    double k[3] = {0, 0, 0};
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      k[a] = grid.wavenumber(i, a);
      k2 += k[a] * k[a];
    }
    Complex kdotf = 0.0;
    for (int a = 0; a < n; ++a) kdotf += k[a] * spectra[a][i];
    for (int a = 0; a < n; ++a) spectra[a][i] -= k[a] * kdotf / k2;
  }
  return VectorField(grid, std::move(spectra), f.role());
}

VectorField partial(const VectorField& f, int axis) {
  const auto& grid = f.grid();
  std::vector<VectorField::Spectrum> spectra = f.spectra();
  for (auto& spec : spectra) {
    for (std::size_t i = 0; i < grid.size(); ++i) spec[i] *= derivative_symbol(grid, i, axis);
  }
  return VectorField(grid, std::move(spectra));
}

TensorField gradient(const VectorField& f) {
  const auto& grid = f.grid();
  const std::size_t n = static_cast<std::size_t>(grid.dimension());
  std::vector<VectorField::Spectrum> spectra(f.components() * n, VectorField::Spectrum(grid.size()));
  for (std::size_t c = 0; c < f.components(); ++c) {
    const auto src = f.spectral(c);
    for (std::size_t a = 0; a < n; ++a) {
      auto& dst = spectra[c * n + a];
      for (std::size_t i = 0; i < grid.size(); ++i) {
        dst[i] = derivative_symbol(grid, i, static_cast<int>(a)) * src[i];
      }
    }
  }
  return TensorField(f.components(), n, VectorField(grid, std::move(spectra)));
}

VectorField divergence(const TensorField& t) {
  const auto& grid = t.grid();
  const std::size_t n = static_cast<std::size_t>(grid.dimension());
  if (t.cols() != n) throw GridMismatch("tensor divergence needs one column per dimension");
  std::vector<VectorField::Spectrum> spectra(t.rows(), VectorField::Spectrum(grid.size()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto src = t.data().spectral(t.entry(r, j));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        spectra[r][i] += derivative_symbol(grid, i, static_cast<int>(j)) * src[i];
      }
    }
  }
  return VectorField(grid, std::move(spectra));
}

VectorField divergence(const VectorField& f) {
  const auto& grid = f.grid();
  const std::size_t n = static_cast<std::size_t>(grid.dimension());
  if (f.components() != n) throw GridMismatch("divergence needs one component per dimension");
  return divergence(TensorField(1, n, f.with_role(FieldRole::generic)));
}

VectorField curl(const VectorField& u) {
  const auto& grid = u.grid();
  const int n = grid.dimension();
  if (u.components() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("curl needs one component per spatial dimension, got " +
                          std::to_string(u.components()));
  }
  auto d = [&](std::size_t comp, int axis, std::size_t i) {
    return derivative_symbol(grid, i, axis) * u.spectral(comp)[i];
  };
  if (n == 2) {
    VectorField::Spectrum w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = d(1, 0, i) - d(0, 1, i);
    return VectorField(grid, std::vector<VectorField::Spectrum>{std::move(w)});
  }
  std::vector<VectorField::Spectrum> w(3, VectorField::Spectrum(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w[0][i] = d(2, 1, i) - d(1, 2, i);
    w[1][i] = d(0, 2, i) - d(2, 0, i);
    w[2][i] = d(1, 0, i) - d(0, 1, i);
  }
  return VectorField(grid, std::move(w));
}

bool is_dealiased_mode(const SpectralGrid& grid, std::size_t index) {
  const int n = grid.modes_per_axis();
  for (int a = 0; a < grid.dimension(); ++a) {
    // |k| > N/3  <=>  3|k| > N
    if (3 * std::abs(grid.wavenumber(index, a)) > n) return false;
  }
  return true;
}

void dealias_in_place(std::span<Complex> spectrum, const SpectralGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!is_dealiased_mode(grid, i)) spectrum[i] = 0.0;
  }
}

VectorField dealias(const VectorField& f) {
  std::vector<VectorField::Spectrum> spectra = f.spectra();
  for (auto& s : spectra) dealias_in_place(s, f.grid());
  return VectorField(f.grid(), std::move(spectra), f.role());
}

std::vector<Complex> pad_spectrum(std::span<const Complex> coarse, const SpectralGrid& coarse_grid,
                                  const SpectralGrid& fine_grid) {
  const int n = coarse_grid.dimension();
  const int nc = coarse_grid.modes_per_axis();
  const int nf = fine_grid.modes_per_axis();
  if (nf < nc) throw InvalidArgument("padding target must not be coarser");
  if (nf == nc) return {coarse.begin(), coarse.end()};
  const bool split_nyquist = nc % 2 == 0;
  std::vector<Complex> fine(fine_grid.size());
  int k[3];
  int target[3];
  for (std::size_t i = 0; i < coarse_grid.size(); ++i) {
    if (coarse[i] == Complex{}) continue;
    int nyquist_axes = 0;
    for (int a = 0; a < n; ++a) {
      k[a] = coarse_grid.wavenumber(i, a);
      if (split_nyquist && k[a] == -nc / 2) ++nyquist_axes;
    }
    // Each Nyquist axis contributes the pair {-N/2, +N/2} with weight 1/2.
    const int combos = 1 << nyquist_axes;
    const double weight = 1.0 / combos;
    for (int mask = 0; mask < combos; ++mask) {
      int bit = 0;
      for (int a = 0; a < n; ++a) {
        target[a] = k[a];
        if (split_nyquist && k[a] == -nc / 2) {
          if (mask & (1 << bit)) target[a] = nc / 2;
          ++bit;
        }
      }
      fine[fine_grid.index_of(std::span<const int>(target, n))] += weight * coarse[i];
    }
  }
  return fine;
}

std::vector<Complex> truncate_spectrum(std::span<const Complex> fine, const SpectralGrid& fine_grid,
                                       const SpectralGrid& coarse_grid) {
  const int n = coarse_grid.dimension();
  const int nc = coarse_grid.modes_per_axis();
  const int nf = fine_grid.modes_per_axis();
  if (nf < nc) throw InvalidArgument("truncation target must not be finer");
  if (nf == nc) return {fine.begin(), fine.end()};
  std::vector<Complex> coarse(coarse_grid.size());
  int k[3];
  for (std::size_t i = 0; i < fine_grid.size(); ++i) {
    bool inside = true;
    for (int a = 0; a < n; ++a) {
      k[a] = fine_grid.wavenumber(i, a);
      // +N/2 folds onto the stored -N/2 wavenumber, as sampling would.
      if (nc % 2 == 0 && k[a] == nc / 2) k[a] = -nc / 2;
      if (2 * k[a] >= nc || 2 * k[a] < -nc) inside = false;
    }
    if (inside) coarse[coarse_grid.index_of(std::span<const int>(k, n))] += fine[i];
  }
  return coarse;
}

std::vector<double> sample_spectrum(std::span<const Complex> spectrum, const SpectralGrid& grid,
                                    int points) {
  const SpectralGrid target = grid.resampled(points);
  std::vector<double> out(target.size());
  if (points == grid.modes_per_axis()) {
    grid.inverse(spectrum, out);
  } else if (points > grid.modes_per_axis()) {
    target.inverse(pad_spectrum(spectrum, grid, target), out);
  } else {
    target.inverse(truncate_spectrum(spectrum, grid, target), out);
  }
  return out;
}

std::vector<std::vector<double>> sample_field(const VectorField& f, int points) {
  std::vector<std::vector<double>> out;
  out.reserve(f.components());
  for (std::size_t c = 0; c < f.components(); ++c) {
    if (points == f.grid().modes_per_axis()) {
      out.push_back(f.physical(c));
    } else {
      out.push_back(sample_spectrum(f.spectral(c), f.grid(), points));
    }
  }
  return out;
}

double divergence_residual(const VectorField& u) {
  const auto& grid = u.grid();
  const int n = grid.dimension();
  if (u.components() != static_cast<std::size_t>(n)) {
    throw GridMismatch("divergence needs one component per dimension");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Complex acc = 0.0;
    for (int a = 0; a < n; ++a) acc += derivative_symbol(grid, i, a) * u.spectral(a)[i];
    total += std::abs(acc);
  }
  return total;
}

}  // namespace mildflow
