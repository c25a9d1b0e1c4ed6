#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "sno/series.hpp"

namespace sno {

// Chebyshev collocation differentiation matrix on cheb_points(n): maps values
// of a function at the n+1 nodes to values of the derivative of its degree-n
// interpolant at the same nodes. Diagonal via the negative-sum trick.
Eigen::MatrixXd cheb_diff_matrix(std::size_t n);

// Solves -(k u')' = f on [-1,1], u(-1) = u(1) = 0, by collocation:
// D diag(k) D with the two boundary rows replaced by identity, dense LU.
// k is evaluated at the nodes from its series (any basis). forcing holds f at
// the n+1 nodes; empty means f = 1.
GridFunction elliptic_solve_1d(const CoeffSeries& k, std::size_t n,
                               const Eigen::VectorXd& forcing = Eigen::VectorXd());

// Separable-coefficient 2D problem -div(kx(x) ky(y) grad u) = f on the square,
// zero Dirichlet boundary, Kronecker-assembled collocation and dense LU.
// forcing holds f at nodes, row-major (i_x * (n+1) + i_y); empty means f = 1.
// Rejects n > 48 (dense system grows as (n+1)^2 squared).
GridFunction elliptic_solve_2d(const CoeffSeries& kx, const CoeffSeries& ky, std::size_t n,
                               const Eigen::VectorXd& forcing = Eigen::VectorXd());

struct BurgersConfig {
  double nu = 0.1;
  double dt = 1e-4;
  std::size_t grid = 64;     // uniform points, even
  double blowup_limit = 1e3; // abort when max|u| exceeds this
};

// Integrating-factor Fourier pseudospectral RK4 for u_t + (u^2/2)_x = nu u_xx,
// periodic on [-1,1]. The viscous term is handled exactly by the exponential
// factor; the quadratic term is dealiased with 3/2-rule padding. Returns the
// packed Fourier series of u at each requested time (times non-decreasing,
// starting at >= 0).
std::vector<CoeffSeries> burgers_solve(const CoeffSeries& f, const BurgersConfig& cfg,
                                       const std::vector<double>& times);

struct SolitonParams {
  double a = 10.0;
  double x0 = 0.0;
};

struct TwoSolitonParams {
  double a1 = 10.0;
  double a2 = 5.0;
  double x01 = -0.6;
  double x02 = -0.5;
};

struct BreatherParams {
  double nu = 1.5; // > 1
  double p() const;
  double omega() const;
};

// u(x,t) = 3 (a / cosh(a(x+x0)/2 - a^3 t/2))^2. Overflow-safe for any argument.
double kdv_soliton(const SolitonParams& p, double x, double t);

// Two-soliton interaction, phi_i = a_i(x + x0_i) - 4 a_i^3 t:
//   u = (2 a2^2 (a1^2-a2^2) sinh^2 phi1 + 2 a1^2 (a1^2-a2^2) cosh^2 phi2)
//       / (a1 cosh phi1 cosh phi2 - a2 sinh phi1 sinh phi2)^2.
// Evaluated with the exponential prefactors cancelled analytically, so no
// intermediate overflows for the benchmark parameter ranges. Requires a1 > a2.
double kdv_two_soliton(const TwoSolitonParams& p, double x, double t);

// Kuznetsov-Ma breather psi(x,t) and its modulus, p = 2 sqrt(nu^2-1), w = p nu:
//   psi = ((-p^2 cos(wt) - 2 i p nu sin(wt)) / (2 cos(wt) - 2 nu cosh(p x / sqrt 2)) - 1) e^{it}.
std::complex<double> km_breather_psi(const BreatherParams& p, double x, double t);
double km_breather(const BreatherParams& p, double x, double t);

}  // namespace sno
