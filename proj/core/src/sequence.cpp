#include "sno/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sno/errors.hpp"

namespace sno {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool seq_equal(const Seq& a, const Seq& b, double tol) {
  detail::require(a.basis == b.basis, "seq_equal: basis mismatch");
  const std::size_t n = std::max(a.length(), b.length());
  for (std::size_t i = 0; i < n; ++i) {
    cplx av = i < a.length() ? a.v[static_cast<Eigen::Index>(i)] : cplx{0.0, 0.0};
    cplx bv = i < b.length() ? b.v[static_cast<Eigen::Index>(i)] : cplx{0.0, 0.0};
    if (std::abs(av - bv) > tol) return false;
  }
  return true;
}

Seq seq_add(const Seq& a, const Seq& b) {
  detail::require(a.basis == b.basis, "seq_add: basis mismatch");
  const std::size_t n = std::max(a.length(), b.length());
  Seq out{a.basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < a.length(); ++i)
    out.v[static_cast<Eigen::Index>(i)] += a.v[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i < b.length(); ++i)
    out.v[static_cast<Eigen::Index>(i)] += b.v[static_cast<Eigen::Index>(i)];
  return out;
}

Seq seq_matvec(const SeqOperator& op, const Seq& x) {
  detail::require(op.basis == x.basis, "seq_matvec: basis mismatch");
  const std::size_t k = op.cols();
  Eigen::VectorXcd xk = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k));
  const std::size_t copy = std::min(k, x.length());
  for (std::size_t i = 0; i < copy; ++i)
    xk[static_cast<Eigen::Index>(i)] = x.v[static_cast<Eigen::Index>(i)];
  return Seq{op.basis, op.m * xk};
}

cplx seq_inner(const Seq& a, const Seq& b) {
  detail::require(a.basis == b.basis, "seq_inner: basis mismatch");
  const std::size_t n = std::min(a.length(), b.length());
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    acc += a.v[static_cast<Eigen::Index>(i)] * std::conj(b.v[static_cast<Eigen::Index>(i)]);
  return acc;
}

FuncMatrix bias_broadcast_add(const FuncMatrix& u, const Seq& b) {
  detail::require(u.basis == b.basis, "bias_broadcast_add: basis mismatch");
  const std::size_t rows = static_cast<std::size_t>(u.coeffs.rows());
  const std::size_t cols =
      std::max(static_cast<std::size_t>(u.coeffs.cols()), b.length());
  FuncMatrix out{u.basis,
                 Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                        static_cast<Eigen::Index>(cols))};
  out.coeffs.topLeftCorner(u.coeffs.rows(), u.coeffs.cols()) = u.coeffs;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < b.length(); ++j)
      out.coeffs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) +=
          b.v[static_cast<Eigen::Index>(j)];
  return out;
}

cplx basis_function(const AxisBasis& basis, std::size_t i, double x) {
  if (basis.kind == BasisKind::Fourier)
    return std::polar(1.0, kPi * static_cast<double>(i) * x);
  // T_i(x) for x in [-1,1].
  return std::cos(static_cast<double>(i) * std::acos(std::clamp(x, -1.0, 1.0)));
}

double dual_weight(const AxisBasis& basis, std::size_t j) {
  if (basis.kind == BasisKind::Fourier) return 0.5;
  return (j == 0 ? 1.0 : 2.0) / kPi;
}

cplx kernel_eval(const SeqOperator& op, double x, double y) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < op.rows(); ++i) {
    cplx fx = basis_function(op.basis, i, x);
    for (std::size_t j = 0; j < op.cols(); ++j) {
      cplx fy = std::conj(basis_function(op.basis, j, y)) * dual_weight(op.basis, j);
      acc += op.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * fx * fy;
    }
  }
  return acc;
}

}  // namespace sno
