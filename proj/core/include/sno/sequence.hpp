#pragma once

#include <Eigen/Dense>

#include "sno/series.hpp"

namespace sno {

// Coefficient sequences with infinitely many implicit trailing zeros, and the
// finite matrices that act on them. This is the raw linear-algebra view of a
// spectral expansion: entry i is the coefficient of basis function phi_i
// (Chebyshev T_i, Fourier e^{i pi i x} for the stored index), and operators
// act on stored entries directly. Hermitian completion of packed real-signal
// series is a representation concern of CoeffSeries, not of this algebra.

struct Seq {
  AxisBasis basis;
  Eigen::VectorXcd v;

  std::size_t length() const { return static_cast<std::size_t>(v.size()); }
};

// r x k operator: inputs are zero-extended or truncated to k entries, outputs
// have exactly r entries.
struct SeqOperator {
  AxisBasis basis;
  Eigen::MatrixXcd m;

  std::size_t rows() const { return static_cast<std::size_t>(m.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m.cols()); }
};

// Matrix of functions: rows index series coefficients, columns index functions.
struct FuncMatrix {
  AxisBasis basis;
  Eigen::MatrixXcd coeffs;
};

// Equality after zero-extension to a common length.
bool seq_equal(const Seq& a, const Seq& b, double tol = 0.0);

// Sum after zero-extension to max length.
Seq seq_add(const Seq& a, const Seq& b);

// Applies the operator: input truncated / zero-extended to the column count.
Seq seq_matvec(const SeqOperator& op, const Seq& x);

// sum_i a_i conj(b_i) over the common extension.
cplx seq_inner(const Seq& a, const Seq& b);

// Row-sequence addition: every row of U, zero-extended along columns to
// max(cols, len(b)), gains b. A 1-column U with a 3-entry bias becomes rows
// [u + b1, b2, b3].
FuncMatrix bias_broadcast_add(const FuncMatrix& u, const Seq& b);

// Basis function phi_i at x for the stored index i.
cplx basis_function(const AxisBasis& basis, std::size_t i, double x);

// Dual weight w_j with respect to the basis-native measure (Fourier: dy on
// [-1,1], w_j = 1/2; Chebyshev: dy/sqrt(1-y^2), w_j = (2 - delta_{j0})/pi),
// chosen so integrating K(x,y) f(y) against the measure applies the matrix to
// the coefficients of f.
double dual_weight(const AxisBasis& basis, std::size_t j);

// Kernel section K(x,y) = sum_{ij} B_ij phi_i(x) conj(phi_j(y)) w_j.
cplx kernel_eval(const SeqOperator& op, double x, double y);

}  // namespace sno
