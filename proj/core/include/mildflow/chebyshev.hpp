#pragma once

#include <span>
#include <vector>

namespace mildflow {

/// Chebyshev-Lobatto points mapped to [0, 1], ascending, endpoints included.
std::vector<double> lobatto_nodes(int count);

/// Barycentric weights for arbitrary distinct nodes.
std::vector<double> barycentric_weights(std::span<const double> nodes);

/// Values of every Lagrange basis polynomial at x.
std::vector<double> lagrange_basis(std::span<const double> nodes, std::span<const double> weights,
                                   double x);

/// Coefficients c_k of sum_k c_k T_k(2x - 1) interpolating `values` given at
/// lobatto_nodes(values.size()).
std::vector<double> chebyshev_coefficients(std::span<const double> values);

/// Coefficients of the derivative (with respect to x in [0, 1]) of a
/// Chebyshev series in T_k(2x - 1).
std::vector<double> chebyshev_derivative(std::span<const double> coefficients);

/// Clenshaw evaluation of sum_k c_k T_k(2x - 1).
double chebyshev_evaluate(std::span<const double> coefficients, double x);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int points);

}  // namespace mildflow
