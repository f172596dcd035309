#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace oracle {

namespace {

using Complex = std::complex<double>;
using Samples = std::vector<double>;

struct Transforms {
  const SpectralGrid& grid;

  std::vector<Complex> fft(const Samples& f) const {
    std::vector<Complex> out(grid.size());
    grid.forward(f, out);
    return out;
  }

  Samples ifft(const std::vector<Complex>& f) const {
    Samples out(grid.size());
    grid.inverse(f, out);
    return out;
  }

  double k(std::size_t idx, int axis) const { return grid.wavenumber_scale() * grid.wavenumber(idx, axis); }

  bool kept(std::size_t idx) const {
    for (int a = 0; a < grid.dimension(); ++a) {
      if (3 * std::abs(grid.wavenumber(idx, a)) > grid.modes_per_axis()) return false;
    }
    return true;
  }

  void truncate(std::vector<Complex>& f) const {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!kept(i)) f[i] = 0.0;
    }
  }

  Samples truncated(const Samples& f) const {
    auto s = fft(f);
    truncate(s);
    return ifft(s);
  }

  Samples derivative(const Samples& f, int axis) const {
    auto s = fft(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = grid.is_nyquist(i) ? Complex(0.0) : s[i] * Complex(0.0, k(i, axis));
    }
    return ifft(s);
  }

  Samples laplacian(const Samples& f) const {
    auto s = fft(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
      double kk = 0.0;
      for (int a = 0; a < grid.dimension(); ++a) kk += k(i, a) * k(i, a);
      s[i] *= -kk;
    }
    return ifft(s);
  }
};

struct State {
  std::vector<Samples> u;
  std::vector<Samples> d;
};

State axpy(const State& x, double a, const State& y) {
  State out = x;
  for (std::size_t c = 0; c < out.u.size(); ++c) {
    for (std::size_t i = 0; i < out.u[c].size(); ++i) out.u[c][i] += a * y.u[c][i];
  }
  for (std::size_t c = 0; c < out.d.size(); ++c) {
    for (std::size_t i = 0; i < out.d[c].size(); ++i) out.d[c][i] += a * y.d[c][i];
  }
  return out;
}

// Leray projection of a vector of samples, k = 0 left alone.
std::vector<Samples> project(const Transforms& tr, const std::vector<Samples>& f) {
  const int n = tr.grid.dimension();
  std::vector<std::vector<Complex>> s;
  for (const auto& c : f) s.push_back(tr.fft(c));
  for (std::size_t i = 0; i < tr.grid.size(); ++i) {
    double kk = 0.0;
    Complex kf = 0.0;
    for (int a = 0; a < n; ++a) {
      kk += tr.k(i, a) * tr.k(i, a);
      kf += tr.k(i, a) * s[a][i];
    }
    if (kk == 0.0) continue;
    for (int a = 0; a < n; ++a) s[a][i] -= tr.k(i, a) * kf / kk;
  }
  std::vector<Samples> out;
  for (auto& c : s) {
    tr.truncate(c);
    out.push_back(tr.ifft(c));
  }
  return out;
}

State rhs(const Transforms& tr, const State& x) {
  const int n = tr.grid.dimension();
  const std::size_t size = tr.grid.size();
  std::vector<Samples> u;
  std::vector<Samples> d;
  for (const auto& c : x.u) u.push_back(tr.truncated(c));
  for (const auto& c : x.d) d.push_back(tr.truncated(c));

  // grad_d[c][a] = d_a d_c
  std::vector<std::vector<Samples>> grad_d(3, std::vector<Samples>(n));
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < n; ++a) grad_d[c][a] = tr.derivative(d[c], a);
  }

  // Momentum flux F_ij = u_i u_j + sum_c d_i d_c d_j d_c, then div.
  std::vector<Samples> div(n, Samples(size, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Samples flux(size);
      for (std::size_t p = 0; p < size; ++p) {
        double v = u[i][p] * u[j][p];
        for (int c = 0; c < 3; ++c) v += grad_d[c][i][p] * grad_d[c][j][p];
        flux[p] = v;
      }
      const auto dj = tr.derivative(tr.truncated(flux), j);
      for (std::size_t p = 0; p < size; ++p) div[i][p] += dj[p];
    }
  }
  auto proj = project(tr, div);

  State out;
  for (int i = 0; i < n; ++i) {
    const auto lap = tr.laplacian(u[i]);
    Samples r(size);
    for (std::size_t p = 0; p < size; ++p) r[p] = lap[p] - proj[i][p];
    out.u.push_back(std::move(r));
  }
  Samples grad_sq(size, 0.0);
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < n; ++a) {
      for (std::size_t p = 0; p < size; ++p) grad_sq[p] += grad_d[c][a][p] * grad_d[c][a][p];
    }
  }
  grad_sq = tr.truncated(grad_sq);
  for (int c = 0; c < 3; ++c) {
    Samples source(size);
    for (std::size_t p = 0; p < size; ++p) {
      double adv = 0.0;
      for (int a = 0; a < n; ++a) adv += u[a][p] * grad_d[c][a][p];
      source[p] = grad_sq[p] * d[c][p] - adv;
    }
    const auto lap = tr.laplacian(d[c]);
    const auto src = tr.truncated(source);
    Samples r(size);
    for (std::size_t p = 0; p < size; ++p) r[p] = lap[p] + src[p];
    out.d.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::pair<VectorField, VectorField> rk4_solve(const VectorField& u0, const VectorField& d0, double T,
                                              double dt) {
  const auto& grid = u0.grid();
  const Transforms tr{grid};
  State x;
  for (std::size_t c = 0; c < u0.components(); ++c) x.u.push_back(u0.physical(c));
  for (std::size_t c = 0; c < d0.components(); ++c) x.d.push_back(d0.physical(c));
  const int steps = static_cast<int>(std::ceil(T / dt - 1e-9));
  const double h = T / steps;
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rhs(tr, x);
    const auto k2 = rhs(tr, axpy(x, 0.5 * h, k1));
    const auto k3 = rhs(tr, axpy(x, 0.5 * h, k2));
    const auto k4 = rhs(tr, axpy(x, h, k3));
    x = axpy(x, h / 6.0, k1);
    x = axpy(x, h / 3.0, k2);
    x = axpy(x, h / 3.0, k3);
    x = axpy(x, h / 6.0, k4);
  }
  return {VectorField::from_physical(grid, x.u, mildflow::FieldRole::velocity),
          VectorField::from_physical(grid, x.d, mildflow::FieldRole::director)};
}

std::vector<double> fd4_derivative(const std::vector<double>& f, const SpectralGrid& grid, int axis) {
  const int n = grid.dimension();
  const int N = grid.modes_per_axis();
  const double h = grid.spacing();
  std::vector<double> out(f.size());
  std::size_t stride = 1;
  for (int a = n - 1; a > axis; --a) stride *= N;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const int i = static_cast<int>((p / stride) % N);
    auto at = [&](int off) {
      const int j = ((i + off) % N + N) % N;
      return f[p + (static_cast<long>(j) - i) * static_cast<long>(stride)];
    };
    out[p] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  return out;
}

VectorField projected_convection(const VectorField& u) {
  const auto& grid = u.grid();
  const Transforms tr{grid};
  const int n = grid.dimension();
  std::vector<Samples> div(n, Samples(grid.size(), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Samples flux(grid.size());
      for (std::size_t p = 0; p < grid.size(); ++p) flux[p] = u.physical(i)[p] * u.physical(j)[p];
      const auto dj = tr.derivative(flux, j);
      for (std::size_t p = 0; p < grid.size(); ++p) div[i][p] -= dj[p];
    }
  }
  return VectorField::from_physical(grid, project(tr, div), mildflow::FieldRole::velocity);
}

std::complex<double> trapezoid_duhamel(std::complex<double> a, std::complex<double> b, double lambda,
                                       double t, int nodes) {
  const double h = t / (nodes - 1);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    acc += w * std::exp(-lambda * (t - s));
  }
  return std::exp(-lambda * t) * a + h * acc * b;
}

double midpoint_integral(int dimension, double period, int points,
                         const std::function<double(const double*)>& f) {
  const double h = period / points;
  std::size_t total = 1;
  for (int a = 0; a < dimension; ++a) total *= points;
  double acc = 0.0;
  double x[3];
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t q = p;
    for (int a = dimension - 1; a >= 0; --a) {
      x[a] = (static_cast<double>(q % points) + 0.5) * h;
      q /= points;
    }
    acc += f(x);
  }
  return acc * std::pow(h, dimension);
}

std::vector<double> brute_force_modulus(const mildflow::SampledField& f, const std::vector<double>& radii) {
  const int n = f.dimension;
  const int N = f.points;
  const double h = f.period / N;
  std::vector<double> eta(radii.size(), 0.0);
  std::vector<std::array<int, 3>> idx(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    std::size_t q = p;
    for (int a = n - 1; a >= 0; --a) {
      idx[p][a] = static_cast<int>(q % N);
      q /= N;
    }
  }
  for (std::size_t p = 0; p < f.size(); ++p) {
    for (std::size_t q = 0; q < f.size(); ++q) {
      if (p == q) continue;
      double dist2 = 0.0;
      for (int a = 0; a < n; ++a) {
        int delta = std::abs(idx[p][a] - idx[q][a]);
        delta = std::min(delta, N - delta);
        dist2 += (delta * h) * (delta * h);
      }
      const double dist = std::sqrt(dist2);
      double diff2 = 0.0;
      for (const auto& c : f.values) diff2 += (c[p] - c[q]) * (c[p] - c[q]);
      const double diff = std::sqrt(diff2);
      for (std::size_t r = 0; r < radii.size(); ++r) {
        if (dist <= radii[r] * (1.0 + 1e-12)) eta[r] = std::max(eta[r], diff);
      }
    }
  }
  return eta;
}

}  // namespace oracle
