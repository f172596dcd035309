#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mildflow/grid.hpp"

namespace mildflow {

/// Per-mode weights for the exponential integral over one time window.
///
/// With node offsets 0 = tau_0 < ... < tau_{m-1} and the Lagrange basis l_j of
/// those nodes,
///   weight(c, i, j) = int_0^{tau_i} exp(-lambda_c (tau_i - s)) l_j(s) ds,
/// where lambda_c is the c-th distinct |k|^2 of the grid. For any source
/// sampled at the nodes, sum_j weight(c, i, j) N_j is the exact integral of
/// the stiff factor against the interpolating polynomial.
class DuhamelWeights {
 public:
  DuhamelWeights(const SpectralGrid& grid, std::span<const double> offsets);

  std::size_t nodes() const noexcept { return offsets_.size(); }
  std::span<const double> offsets() const noexcept { return offsets_; }
  std::size_t classes() const noexcept { return lambda_.size(); }
  double eigenvalue(std::size_t cls) const { return lambda_[cls]; }

  double weight(std::size_t cls, std::size_t i, std::size_t j) const {
    return weights_[(cls * nodes() + i) * nodes() + j];
  }
  /// exp(-lambda_c tau_i)
  double decay(std::size_t cls, std::size_t i) const { return decay_[cls * nodes() + i]; }

 private:
  std::vector<double> offsets_;
  std::vector<double> lambda_;
  std::vector<double> weights_;
  std::vector<double> decay_;
};

/// int_0^tau exp(-lambda (tau - s)) p(s) ds for the polynomial p given by its
/// Chebyshev coefficients on [0, T] (variable s / T). Exposed for testing.
double exponential_moment(std::span<const double> chebyshev, double window, double tau,
                          double lambda);

}  // namespace mildflow
