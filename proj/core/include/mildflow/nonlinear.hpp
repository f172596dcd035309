#pragma once

#include "mildflow/field.hpp"

namespace mildflow {

enum class DealiasMode {
  /// All products formed on the native grid and truncated by the 2/3 rule.
  two_thirds,
  /// As two_thirds, except |grad d|^2 d is formed on a 2x refined grid.
  refined_cubic,
};

struct NonlinearOptions {
  DealiasMode dealias = DealiasMode::refined_cubic;
};

/// div(u (x) u + grad d (.) grad d), with (grad d (.) grad d)_{ij} = d_i d . d_j d.
/// Inputs and products are truncated to the 2/3 band.
VectorField momentum_nonlinearity(const VectorField& u, const VectorField& d,
                                  const NonlinearOptions& options = {});

/// |grad d|^2 d - (u . grad) d, dealiased.
VectorField director_nonlinearity(const VectorField& u, const VectorField& d,
                                  const NonlinearOptions& options = {});

}  // namespace mildflow
