#include "mildflow/exponential_weights.hpp"

#include <cmath>

#include "mildflow/chebyshev.hpp"
#include "mildflow/error.hpp"

namespace mildflow {

namespace {

// Above this value of lambda * tau the integration-by-parts series is used;
// below it a 64-point Gauss rule integrates the smooth integrand exactly to
// rounding for polynomial degree up to 23.
constexpr double kSeriesThreshold = 64.0;
constexpr int kGaussPoints = 64;
constexpr int kMaxNodes = 24;

}  // namespace

double exponential_moment(std::span<const double> chebyshev, double window, double tau,
                          double lambda) {
  if (tau <= 0.0) return 0.0;
  const double z = lambda * tau;
  if (z <= kSeriesThreshold) {
    const auto& rule = gauss_legendre(kGaussPoints);
    double acc = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double s = tau * rule.nodes[g];
      acc += rule.weights[g] * std::exp(-lambda * (tau - s)) *
             chebyshev_evaluate(chebyshev, s / window);
    }
    return tau * acc;
  }
  // sum_r (-1)^r (p^(r)(tau) - e^{-z} p^(r)(0)) / lambda^{r+1}
  const double tail = std::exp(-z);
  std::vector<double> coeffs(chebyshev.begin(), chebyshev.end());
  double acc = 0.0;
  double sign = 1.0;
  double scale = 1.0 / lambda;
  for (std::size_t r = 0; r < chebyshev.size(); ++r) {
    const double end = chebyshev_evaluate(coeffs, tau / window);
    const double start = chebyshev_evaluate(coeffs, 0.0);
    acc += sign * scale * (end - tail * start);
    coeffs = chebyshev_derivative(coeffs);
    for (double& c : coeffs) c /= window;
    sign = -sign;
    scale /= lambda;
  }
  return acc;
}

DuhamelWeights::DuhamelWeights(const SpectralGrid& grid, std::span<const double> offsets)
    : offsets_(offsets.begin(), offsets.end()) {
  const std::size_t m = offsets_.size();
  if (m < 2 || m > kMaxNodes) throw InvalidArgument("window needs between 2 and 24 nodes");
  if (offsets_.front() != 0.0) throw InvalidArgument("first node offset must be zero");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(offsets_[i] > offsets_[i - 1])) throw InvalidArgument("node times must increase");
  }
  const double window = offsets_.back();

  // Lagrange basis in the normalized variable s / window, as Chebyshev series.
  std::vector<double> unit(m);
  for (std::size_t j = 0; j < m; ++j) unit[j] = offsets_[j] / window;
  const auto bary = barycentric_weights(unit);
  const auto cheb_points = lobatto_nodes(static_cast<int>(m));
  std::vector<std::vector<double>> basis(m);
  {
    std::vector<std::vector<double>> samples(m, std::vector<double>(m));
    for (std::size_t p = 0; p < m; ++p) {
      const auto l = lagrange_basis(unit, bary, cheb_points[p]);
      for (std::size_t j = 0; j < m; ++j) samples[j][p] = l[j];
    }
    for (std::size_t j = 0; j < m; ++j) basis[j] = chebyshev_coefficients(samples[j]);
  }

  const auto k2 = grid.distinct_wavenumber_squares();
  const double s2 = grid.wavenumber_scale() * grid.wavenumber_scale();
  lambda_.resize(k2.size());
  for (std::size_t c = 0; c < k2.size(); ++c) lambda_[c] = s2 * k2[c];
  weights_.assign(k2.size() * m * m, 0.0);
  decay_.assign(k2.size() * m, 0.0);

  const auto& rule = gauss_legendre(kGaussPoints);
  const std::size_t g_count = rule.nodes.size();
  std::vector<double> basis_at_gauss(m * g_count);
  std::vector<double> kernel(g_count);
  for (std::size_t i = 0; i < m; ++i) {
    const double tau = offsets_[i];
    for (std::size_t g = 0; g < g_count; ++g) {
      const auto l = lagrange_basis(unit, bary, tau * rule.nodes[g] / window);
      for (std::size_t j = 0; j < m; ++j) basis_at_gauss[j * g_count + g] = l[j];
    }
    for (std::size_t c = 0; c < k2.size(); ++c) {
      const double lambda = lambda_[c];
      decay_[c * m + i] = std::exp(-lambda * tau);
      if (i == 0) continue;
      double* row = &weights_[(c * m + i) * m];
      if (lambda * tau > kSeriesThreshold) {
        for (std::size_t j = 0; j < m; ++j) row[j] = exponential_moment(basis[j], window, tau, lambda);
        continue;
      }
      for (std::size_t g = 0; g < g_count; ++g) {
        kernel[g] = tau * rule.weights[g] * std::exp(-lambda * tau * (1.0 - rule.nodes[g]));
      }
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        const double* b = &basis_at_gauss[j * g_count];
        for (std::size_t g = 0; g < g_count; ++g) acc += kernel[g] * b[g];
        row[j] = acc;
      }
    }
  }
}

}  // namespace mildflow
