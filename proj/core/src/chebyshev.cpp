#include "mildflow/chebyshev.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mildflow/error.hpp"

namespace mildflow {

std::vector<double> lobatto_nodes(int count) {
  if (count < 2) throw InvalidArgument("need at least two Chebyshev-Lobatto nodes");
  std::vector<double> x(count);
  for (int j = 0; j < count; ++j) {
    x[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / (count - 1)));
  }
  x.front() = 0.0;
  x.back() = 1.0;
  return x;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
    }
  }
  // Rescale to O(1) magnitudes; the barycentric formula is invariant to it.
  double big = 0.0;
  for (double v : w) big = std::max(big, std::abs(v));
  for (double& v : w) v /= big;
  return w;
}

std::vector<double> lagrange_basis(std::span<const double> nodes, std::span<const double> weights,
                                   double x) {
  std::vector<double> out(nodes.size(), 0.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) {
      out[j] = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out[j] = weights[j] / (x - nodes[j]);
    denom += out[j];
  }
  for (double& v : out) v /= denom;
  return out;
}

std::vector<double> chebyshev_coefficients(std::span<const double> values) {
  const int m = static_cast<int>(values.size());
  const int n = m - 1;
  // values are at x_j = (1 - cos(pi j / n)) / 2, i.e. y_j = -cos(pi j / n)
  // = cos(pi (n - j) / n); reverse to standard DCT-I order.
  std::vector<double> c(m, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double f = values[n - j];
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += w * f * std::cos(std::numbers::pi * k * j / n);
    }
    c[k] = 2.0 * acc / n;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

std::vector<double> chebyshev_derivative(std::span<const double> coefficients) {
  const int m = static_cast<int>(coefficients.size());
  std::vector<double> d(m, 0.0);
  if (m < 2) return d;
  // d/dy recurrence: d_{k-1} = d_{k+1} + 2 k c_k
  for (int k = m - 1; k >= 1; --k) {
    const double next = k + 1 < m ? d[k + 1] : 0.0;
    d[k - 1] = next + 2.0 * k * coefficients[k];
  }
  d[0] *= 0.5;
  // dy/dx = 2 on [0, 1]
  for (double& v : d) v *= 2.0;
  return d;
}

double chebyshev_evaluate(std::span<const double> coefficients, double x) {
  const double y = 2.0 * x - 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 1;) {
    const double b0 = 2.0 * y * b1 - b2 + coefficients[k];
    b2 = b1;
    b1 = b0;
  }
  return y * b1 - b2 + (coefficients.empty() ? 0.0 : coefficients[0]);
}

const GaussRule& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  if (points < 1) throw InvalidArgument("Gauss-Legendre needs at least one point");

  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (points == 1) p0 = 1.0;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[points - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[points - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

}  // namespace mildflow
