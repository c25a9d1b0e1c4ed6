#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sno {

using cplx = std::complex<double>;

enum class BasisKind { Chebyshev, Fourier };

// Per-axis basis tag. real_signal applies to Fourier axes only: when set, the
// axis stores harmonics k = 0..K of a Hermitian spectrum (c_{-k} = conj(c_k)
// is implicit), so "2K+1 harmonics" occupy K+1 complex entries. When clear,
// the axis stores all m harmonics in FFT index order (0, 1, .., K, -K', .., -1).
struct AxisBasis {
  BasisKind kind = BasisKind::Chebyshev;
  bool real_signal = true;

  friend bool operator==(const AxisBasis& a, const AxisBasis& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == BasisKind::Fourier) return a.real_signal == b.real_signal;
    return true;
  }
};

// Truncated spectral expansion over [-1,1]^D, D in {1,2}. Chebyshev axes hold
// c_0..c_n of sum c_i T_i(x); Fourier axes hold coefficients of exp(i pi k x)
// as described on AxisBasis. Storage is row-major.
struct CoeffSeries {
  std::vector<AxisBasis> axes;
  std::vector<std::size_t> shape;
  std::vector<cplx> coeffs;

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const;

  static CoeffSeries zeros(std::vector<AxisBasis> axes, std::vector<std::size_t> shape);
  static CoeffSeries d1(AxisBasis axis, std::vector<cplx> coeffs);
};

enum class GridKind { Chebyshev, Uniform };

// Samples of a function on a tensor-product grid. Chebyshev axes use
// x_k = cos(k pi / n), k = 0..n (descending); Uniform axes use
// x_j = -1 + 2 j / m, j = 0..m-1 (right endpoint excluded).
struct GridFunction {
  std::vector<GridKind> grids;
  std::vector<std::size_t> shape;
  std::vector<cplx> values;

  std::size_t rank() const { return shape.size(); }
  std::size_t size() const;

  static GridFunction zeros(std::vector<GridKind> grids, std::vector<std::size_t> shape);
  static GridFunction d1(GridKind kind, std::vector<cplx> values);
};

void validate(const CoeffSeries& s);
void validate(const GridFunction& g);

// Chebyshev nodes of degree n (n >= 1): n+1 points cos(k pi / n), descending.
std::vector<double> cheb_points(std::size_t n);
// Uniform periodic nodes: m points -1 + 2 j / m (m >= 1).
std::vector<double> uniform_points(std::size_t m);

// Number of grid points an axis naturally synthesizes to: Chebyshev n+1 -> n+1
// points; packed Fourier K+1 entries -> 2K+1 points; full Fourier m -> m.
std::size_t natural_grid_size(const AxisBasis& axis, std::size_t coeff_count);
// Coefficient count produced by analyzing an axis with m points.
std::size_t coeff_count_for_grid(const AxisBasis& axis, std::size_t grid_points);

// Signed harmonic for FFT-order index t of a full-spectrum axis of size m:
// t <= m/2 ? t : t - m.
long long fft_signed_harmonic(std::size_t t, std::size_t m);

// Pointwise evaluation of the expansion (1D / 2D). Chebyshev axes use complex
// Clenshaw recurrence; Fourier axes sum phasors (packed axes evaluate the
// implicit Hermitian pair sum).
cplx evaluate(const CoeffSeries& s, double x);
cplx evaluate(const CoeffSeries& s, double x0, double x1);

// d/dx of a 1D series. Chebyshev: backward coefficient recurrence, output one
// entry shorter (length 1 input maps to the zero series of length 1).
// Fourier: c_k -> i pi k c_k, same length.
CoeffSeries differentiate(const CoeffSeries& s);

// Antiderivative of a 1D series. Chebyshev: length + 1, constant chosen so the
// result vanishes at x = -1. Fourier: c_k -> c_k / (i pi k); requires the mean
// c_0 to vanish (throws otherwise), output c_0 is 0.
CoeffSeries integrate(const CoeffSeries& s);

// Translation f(x) -> f(x + delta) for 1D Fourier series: c_k -> c_k e^{i pi k delta}.
// Chebyshev input throws (not closed under shifts).
CoeffSeries shift(const CoeffSeries& s, double delta);

// Exact product series of two 1D expansions in the same basis; output length
// len_a + len_b - 1. Chebyshev uses T_m T_n = (T_{m+n} + T_{|m-n|}) / 2;
// Fourier convolves the (sign-resolved) spectra.
CoeffSeries multiply(const CoeffSeries& a, const CoeffSeries& b);

// First n coefficients (Fourier: the lowest n harmonics; full-spectrum axes
// keep the balanced FFT-order window). Applies to the given axis.
CoeffSeries chop(const CoeffSeries& s, std::size_t n, std::size_t axis = 0);
// Zero-extension to n coefficients along the given axis; n >= current size.
CoeffSeries pad(const CoeffSeries& s, std::size_t n, std::size_t axis = 0);

// L2 norm in the basis-native measure: Chebyshev axes weight dx/sqrt(1-x^2)
// (|T_0|^2 = pi, |T_n|^2 = pi/2), Fourier axes plain dx on [-1,1]
// (|e^{i pi k x}|^2 = 2). Product measure for 2D.
double norm_l2(const CoeffSeries& s);

// Max |coefficient|.
double max_abs(const CoeffSeries& s);

// True if all imaginary parts are <= tol in magnitude.
bool is_real(const GridFunction& g, double tol = 1e-10);

// Per-axis coefficient weight w_i such that norm_l2^2 = sum w_i |c_i|^2
// (product over axes in 2D).
std::vector<double> norm_weights(const AxisBasis& axis, std::size_t n);

}  // namespace sno
