#pragma once

#include <vector>

#include "mildflow/field.hpp"

namespace mildflow {

/// Oversampling factor used by every sup-norm evaluation.
inline constexpr int kSupNormOversampling = 2;

/// Max over a 2x zero-padded collocation grid of the pointwise Euclidean
/// magnitude |f(x)|.
double sup_norm(const VectorField& f);

/// sum over multi-indices |beta| <= k of sup_norm(d^beta f). Requires k <= N/3.
double sobolev_inf_norm(const VectorField& f, int k);

/// Sup of the pointwise Frobenius magnitude of the l-th derivative tensor
/// (all ordered index tuples). l = 1 gives sup |grad f|.
double derivative_sup_norm(const VectorField& f, int l);

/// sup |grad d| (Frobenius over components and axes).
inline double gradient_sup_norm(const VectorField& d) { return derivative_sup_norm(d, 1); }

/// All multi-indices beta in N_0^n with |beta| == order.
std::vector<std::vector<int>> multi_indices(int dimension, int order);

/// d^beta f, spectrally.
VectorField partial_derivative(const VectorField& f, const std::vector<int>& beta);

}  // namespace mildflow
