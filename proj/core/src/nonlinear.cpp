#include "mildflow/nonlinear.hpp"

#include "mildflow/error.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

using Samples = std::vector<double>;

// Samples of the 2/3-truncated spectrum on `points` per axis.
Samples band_limited_samples(std::span<const Complex> spectrum, const SpectralGrid& grid,
                             int points) {
  std::vector<Complex> band(spectrum.begin(), spectrum.end());
  dealias_in_place(band, grid);
  return sample_spectrum(band, grid, points);
}

// Coefficients on `grid` of a product sampled at `points` per axis, 2/3 truncated.
std::vector<Complex> product_spectrum(const Samples& samples, const SpectralGrid& grid,
                                      int points) {
  const SpectralGrid sampling = grid.resampled(points);
  std::vector<Complex> fine(sampling.size());
  sampling.forward(samples, fine);
  auto coarse = truncate_spectrum(fine, sampling, grid);
  dealias_in_place(coarse, grid);
  return coarse;
}

// Samples of d_i d_c for every axis i and component c, indexed [c * n + i].
std::vector<Samples> director_gradient_samples(const VectorField& d, int points) {
  const auto grad = gradient(d);
  std::vector<Samples> out;
  out.reserve(grad.data().components());
  for (std::size_t e = 0; e < grad.data().components(); ++e) {
    out.push_back(band_limited_samples(grad.data().spectral(e), d.grid(), points));
  }
  return out;
}

}  // namespace

VectorField momentum_nonlinearity(const VectorField& u, const VectorField& d,
                                  const NonlinearOptions&) {
  require_same_grid(u, d);
  const auto& grid = u.grid();
  const std::size_t n = static_cast<std::size_t>(grid.dimension());
  if (u.components() != n) throw GridMismatch("velocity must have n components");
  const int points = grid.modes_per_axis();

  std::vector<Samples> uu;
  for (std::size_t i = 0; i < n; ++i) uu.push_back(band_limited_samples(u.spectral(i), grid, points));
  const auto dd = director_gradient_samples(d, points);
  const std::size_t dc = d.components();

  std::vector<VectorField::Spectrum> stress(n * n);
  Samples prod(grid.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t x = 0; x < grid.size(); ++x) {
        double v = uu[i][x] * uu[j][x];
        for (std::size_t c = 0; c < dc; ++c) v += dd[c * n + i][x] * dd[c * n + j][x];
        prod[x] = v;
      }
      stress[i * n + j] = product_spectrum(prod, grid, points);
      if (j != i) stress[j * n + i] = stress[i * n + j];
    }
  }
  return divergence(TensorField(n, n, VectorField(grid, std::move(stress))));
}

VectorField director_nonlinearity(const VectorField& u, const VectorField& d,
                                  const NonlinearOptions& options) {
  require_same_grid(u, d);
  const auto& grid = u.grid();
  const std::size_t n = static_cast<std::size_t>(grid.dimension());
  if (u.components() != n) throw GridMismatch("velocity must have n components");
  const std::size_t dc = d.components();
  const int native = grid.modes_per_axis();
  const int cubic_points = options.dealias == DealiasMode::refined_cubic ? 2 * native : native;

  // |grad d|^2 d
  std::vector<VectorField::Spectrum> out(dc);
  {
    const auto dd = director_gradient_samples(d, cubic_points);
    std::vector<Samples> dv;
    for (std::size_t c = 0; c < dc; ++c) dv.push_back(band_limited_samples(d.spectral(c), grid, cubic_points));
    Samples grad_sq(dd.front().size(), 0.0);
    for (const auto& g : dd) {
      for (std::size_t x = 0; x < g.size(); ++x) grad_sq[x] += g[x] * g[x];
    }
    Samples prod(grad_sq.size());
    for (std::size_t c = 0; c < dc; ++c) {
      for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = grad_sq[x] * dv[c][x];
      out[c] = product_spectrum(prod, grid, cubic_points);
    }
  }

  // (u . grad) d
  {
    const auto dd = director_gradient_samples(d, native);
    std::vector<Samples> uu;
    for (std::size_t i = 0; i < n; ++i) uu.push_back(band_limited_samples(u.spectral(i), grid, native));
    Samples prod(grid.size());
    for (std::size_t c = 0; c < dc; ++c) {
      for (std::size_t x = 0; x < grid.size(); ++x) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += uu[i][x] * dd[c * n + i][x];
        prod[x] = v;
      }
      const auto adv = product_spectrum(prod, grid, native);
      for (std::size_t k = 0; k < grid.size(); ++k) out[c][k] -= adv[k];
    }
  }
  return VectorField(grid, std::move(out));
}

}  // namespace mildflow
