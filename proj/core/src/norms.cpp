#include "mildflow/norms.hpp"

#include <algorithm>
#include <cmath>

#include "mildflow/error.hpp"
#include "mildflow/spectral.hpp"

namespace mildflow {

namespace {

double pointwise_max(const std::vector<std::vector<double>>& sq_sums) {
  double best = 0.0;
  for (double v : sq_sums.front()) best = std::max(best, v);
  return std::sqrt(best);
}

std::vector<double> squared_magnitude(const VectorField& f, int points) {
  std::vector<double> acc;
  for (std::size_t c = 0; c < f.components(); ++c) {
    const auto samples = points == f.grid().modes_per_axis()
                             ? f.physical(c)
                             : sample_spectrum(f.spectral(c), f.grid(), points);
    if (acc.empty()) acc.assign(samples.size(), 0.0);
    for (std::size_t i = 0; i < samples.size(); ++i) acc[i] += samples[i] * samples[i];
  }
  return acc;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double sup_norm(const VectorField& f) {
  const int points = kSupNormOversampling * f.grid().modes_per_axis();
  return pointwise_max({squared_magnitude(f, points)});
}

std::vector<std::vector<int>> multi_indices(int dimension, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> beta(dimension, 0);
  auto rec = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dimension - 1) {
      beta[axis] = remaining;
      out.push_back(beta);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      beta[axis] = v;
      self(self, axis + 1, remaining - v);
    }
  };
  rec(rec, 0, order);
  return out;
}

VectorField partial_derivative(const VectorField& f, const std::vector<int>& beta) {
  VectorField out = f.with_role(FieldRole::generic);
  for (std::size_t a = 0; a < beta.size(); ++a) {
    for (int r = 0; r < beta[a]; ++r) out = partial(out, static_cast<int>(a));
  }
  return out;
}

double sobolev_inf_norm(const VectorField& f, int k) {
  if (k < 0) throw InvalidArgument("Sobolev index must be non-negative");
  if (3 * k > f.grid().modes_per_axis()) {
    throw InvalidArgument("Sobolev index exceeds N/3 for this grid");
  }
  double total = 0.0;
  for (int order = 0; order <= k; ++order) {
    for (const auto& beta : multi_indices(f.grid().dimension(), order)) {
      total += order == 0 ? sup_norm(f) : sup_norm(partial_derivative(f, beta));
    }
  }
  return total;
}

double derivative_sup_norm(const VectorField& f, int l) {
  if (l < 0) throw InvalidArgument("derivative order must be non-negative");
  if (l == 0) return sup_norm(f);
  const int points = kSupNormOversampling * f.grid().modes_per_axis();
  std::vector<double> acc;
  for (const auto& beta : multi_indices(f.grid().dimension(), l)) {
    // Number of ordered index tuples producing this multi-index.
    double multiplicity = factorial(l);
    for (int b : beta) multiplicity /= factorial(b);
    const auto sq = squared_magnitude(partial_derivative(f, beta), points);
    if (acc.empty()) acc.assign(sq.size(), 0.0);
    for (std::size_t i = 0; i < sq.size(); ++i) acc[i] += multiplicity * sq[i];
  }
  return pointwise_max({acc});
}

}  // namespace mildflow
