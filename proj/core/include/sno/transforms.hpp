#pragma once

#include <vector>

#include "sno/series.hpp"

namespace sno {

// Grid values -> Chebyshev coefficients on cheb_points(n); the normalization
// makes coefficients equal the expansion coefficients exactly (interior rows
// scaled 2/n, endpoint rows 1/n, first/last samples half-weighted), so
// sampling x^2 on cheb_points(2) yields [1/2, 0, 1/2].
CoeffSeries cheb_analysis(const GridFunction& g);

// Chebyshev coefficients -> values on cheb_points(num_points - 1).
// num_points = 0 selects the natural size; any num_points >= 2 is exact point
// sampling (zero padding when refining, modular T_k folding when coarsening).
GridFunction cheb_synthesis(const CoeffSeries& s, std::size_t num_points = 0);

// Grid values -> Fourier coefficients on the uniform periodic grid. With
// real_signal the input must be real up to 1e-9 and only harmonics k = 0..K
// are stored (an even grid's shared Nyquist bin is split in half so the
// two-sided series reproduces the samples).
CoeffSeries fourier_analysis(const GridFunction& g, bool real_signal = true);

// Fourier coefficients -> values on the uniform grid of num_points samples
// (0 selects the natural size). Exact sampling for every size via modular
// harmonic folding.
GridFunction fourier_synthesis(const CoeffSeries& s, std::size_t num_points = 0);

// Tensor-product analysis/synthesis, one transform per axis. Grid and basis
// kinds must correspond (Chebyshev grid <-> Chebyshev basis, uniform <->
// Fourier). At most one packed Fourier axis is meaningful for 2D real data;
// transforms are applied innermost axis first.
CoeffSeries analyze(const GridFunction& g, const std::vector<AxisBasis>& axes);
GridFunction synthesize(const CoeffSeries& s, std::vector<std::size_t> shape = {});

// Evaluates the interpolant on a new tensor grid of the same kinds: exact
// spectral refinement for larger shapes, exact point sampling (with implied
// aliasing) for smaller ones.
GridFunction interpolate_to_grid(const CoeffSeries& s, const std::vector<std::size_t>& shape,
                                 const std::vector<GridKind>& kinds);

// Every step-th sample along each axis. Uniform axes need m % step == 0 and
// Chebyshev axes (m-1) % step == 0 so the coarse grid is a subset of the fine.
GridFunction subsample(const GridFunction& g, const std::vector<std::size_t>& step);

namespace detail {

// Raw planned kernels, shared with the autodiff transform ops. Both are
// unnormalized exactly as FFTW computes them.
void fft_inplace(std::complex<double>* data, std::size_t m, int sign);
void dct1_inplace(double* data, std::size_t num_points);

}  // namespace detail

}  // namespace sno
