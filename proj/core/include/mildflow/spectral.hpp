#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mildflow/field.hpp"

namespace mildflow {

/// e^{t Delta} f: every coefficient scaled by e^{-t|k|^2}. Throws for t < 0.
VectorField heat_semigroup(const VectorField& f, double t);

/// Leray-Helmholtz projection onto divergence-free fields. The k = 0 mode is
/// left unchanged; unpaired Nyquist modes are dropped.
VectorField leray_project(const VectorField& f);

/// Gradient tensor: entry (c, i) = d_i f_c.
TensorField gradient(const VectorField& f);

/// Row divergence: (div T)_r = sum_j d_j T_{rj}. Requires T.cols() == dimension.
VectorField divergence(const TensorField& t);

/// Scalar divergence sum_i d_i f_i of an n-component field.
VectorField divergence(const VectorField& f);

/// curl u: a 3-vector in 3D, the scalar d_1 u_2 - d_2 u_1 in 2D (1 component).
VectorField curl(const VectorField& u);

/// d_axis f for every component.
VectorField partial(const VectorField& f, int axis);

/// Zeroes all modes with some |k_axis| > N/3.
VectorField dealias(const VectorField& f);
void dealias_in_place(std::span<Complex> spectrum, const SpectralGrid& grid);
bool is_dealiased_mode(const SpectralGrid& grid, std::size_t index);

/// Coefficients of a field on `grid` laid out on a finer grid with the same
/// period (zero padding). The unpaired Nyquist coefficient is split evenly
/// between +N/2 and -N/2 so real fields stay real.
std::vector<Complex> pad_spectrum(std::span<const Complex> coarse, const SpectralGrid& coarse_grid,
                                  const SpectralGrid& fine_grid);

/// Inverse of pad_spectrum for band-limited input; modes outside the coarse
/// band are discarded.
std::vector<Complex> truncate_spectrum(std::span<const Complex> fine, const SpectralGrid& fine_grid,
                                       const SpectralGrid& coarse_grid);

/// Physical samples of one spectrum evaluated on `points` samples per axis.
std::vector<double> sample_spectrum(std::span<const Complex> spectrum, const SpectralGrid& grid,
                                    int points);

/// Samples of every component of `f` at `points` per axis.
std::vector<std::vector<double>> sample_field(const VectorField& f, int points);

/// Spectral l1 norm of div u: sum_k |k . uhat(k)|, an upper bound on
/// sup|div u|.
double divergence_residual(const VectorField& u);

}  // namespace mildflow
