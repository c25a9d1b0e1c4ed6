#include "sno/autodiff.hpp"

#include <cmath>
#include <cstring>

#include "sno/errors.hpp"
#include "sno/transforms.hpp"

namespace sno::ad {

namespace {

// In-place S x for one complex column, S_jk = cos(pi j k / n): halve interior
// entries, then REDFT00 on re/im parts.
void apply_cheb_synthesis(cplx* col, std::size_t n_points, std::vector<double>& re,
                          std::vector<double>& im) {
  re.resize(n_points);
  im.resize(n_points);
  for (std::size_t j = 0; j < n_points; ++j) {
    const double h = (j == 0 || j + 1 == n_points) ? 1.0 : 0.5;
    re[j] = col[j].real() * h;
    im[j] = col[j].imag() * h;
  }
  sno::detail::dct1_inplace(re.data(), n_points);
  sno::detail::dct1_inplace(im.data(), n_points);
  for (std::size_t j = 0; j < n_points; ++j) col[j] = cplx(re[j], im[j]);
}

}  // namespace

Tensor Tensor::zeros(std::size_t batch, std::size_t rows, std::size_t cols) {
  Tensor t;
  t.batch = batch;
  t.rows = rows;
  t.cols = cols;
  t.m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(batch * cols));
  return t;
}

Tape::Node& Tape::at(int id) {
  detail::require(id >= 0 && static_cast<std::size_t>(id) < nodes_.size(), "bad tape node id");
  return nodes_[static_cast<std::size_t>(id)];
}

const Tape::Node& Tape::at(int id) const {
  detail::require(id >= 0 && static_cast<std::size_t>(id) < nodes_.size(), "bad tape node id");
  return nodes_[static_cast<std::size_t>(id)];
}

int Tape::push(Node n) {
  detail::require(n.value.m.rows() == static_cast<Eigen::Index>(n.value.rows) &&
                      n.value.m.cols() == static_cast<Eigen::Index>(n.value.batch * n.value.cols),
                  "tensor storage inconsistent with declared shape");
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::constant(Tensor v) {
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(v);
  n.requires_grad = false;
  return push(std::move(n));
}

int Tape::parameter(Tensor v) {
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(v);
  n.requires_grad = true;
  return push(std::move(n));
}

int Tape::matmul(int x, int w, bool transpose_w) {
  const Tensor& xv = at(x).value;
  const Tensor& wv = at(w).value;
  detail::require(wv.batch == 1, "matmul weight must have batch 1");
  const std::size_t contract = transpose_w ? wv.cols : wv.rows;
  const std::size_t out_cols = transpose_w ? wv.rows : wv.cols;
  detail::require(xv.cols == contract, "matmul: inner dimensions differ");
  Node n;
  n.op = Op::MatmulRight;
  n.a = x;
  n.b = w;
  n.transpose_w = transpose_w;
  n.requires_grad = at(x).requires_grad || at(w).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, out_cols);
  for (std::size_t b = 0; b < xv.batch; ++b) {
    if (transpose_w)
      n.value.block(b).noalias() = xv.block(b) * wv.m.transpose();
    else
      n.value.block(b).noalias() = xv.block(b) * wv.m;
  }
  return push(std::move(n));
}

int Tape::lmatmul(int m, int x) {
  const Tensor& mv = at(m).value;
  const Tensor& xv = at(x).value;
  detail::require(mv.batch == 1, "lmatmul matrix must have batch 1");
  detail::require(mv.cols == xv.rows, "lmatmul: inner dimensions differ");
  Node n;
  n.op = Op::MatmulLeft;
  n.a = m;
  n.b = x;
  n.requires_grad = at(m).requires_grad || at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, mv.rows, xv.cols);
  n.value.m.noalias() = mv.m * xv.m;  // one product covers the whole batch
  return push(std::move(n));
}

int Tape::lmatmul_axis(int m, int x, std::size_t r0, std::size_t r1, int axis) {
  const Tensor& mv = at(m).value;
  const Tensor& xv = at(x).value;
  detail::require(mv.batch == 1, "lmatmul_axis matrix must have batch 1");
  detail::require(xv.rows == r0 * r1, "lmatmul_axis: rows != r0*r1");
  detail::require(axis == 0 || axis == 1, "lmatmul_axis: axis must be 0 or 1");
  const std::size_t extent = axis == 0 ? r0 : r1;
  detail::require(mv.rows == extent && mv.cols == extent,
                  "lmatmul_axis: matrix must be square on the axis extent");
  Node n;
  n.op = Op::MatmulAxis;
  n.a = m;
  n.b = x;
  n.r0 = r0;
  n.r1 = r1;
  n.axis = axis;
  n.requires_grad = at(m).requires_grad || at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, xv.cols);
  const Eigen::Index total_cols = xv.m.cols();
  for (Eigen::Index c = 0; c < total_cols; ++c) {
    Eigen::Map<const Eigen::MatrixXcd> X(xv.m.col(c).data(), static_cast<Eigen::Index>(r0),
                                         static_cast<Eigen::Index>(r1));
    Eigen::Map<Eigen::MatrixXcd> Y(n.value.m.col(c).data(), static_cast<Eigen::Index>(r0),
                                   static_cast<Eigen::Index>(r1));
    if (axis == 0)
      Y.noalias() = mv.m * X;
    else
      Y.noalias() = X * mv.m.transpose();
  }
  return push(std::move(n));
}

int Tape::mode_matmul(int x, int r) {
  const Tensor& xv = at(x).value;
  const Tensor& rv = at(r).value;
  detail::require(rv.batch == xv.rows, "mode_matmul: need one weight matrix per row");
  detail::require(rv.rows == xv.cols, "mode_matmul: channel dimensions differ");
  Node n;
  n.op = Op::ModeMatmul;
  n.a = x;
  n.b = r;
  n.requires_grad = at(x).requires_grad || at(r).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, rv.cols);
  for (std::size_t b = 0; b < xv.batch; ++b)
    for (std::size_t k = 0; k < xv.rows; ++k)
      n.value.block(b).row(static_cast<Eigen::Index>(k)).noalias() =
          xv.block(b).row(static_cast<Eigen::Index>(k)) * rv.block(k);
  return push(std::move(n));
}

int Tape::add(int x, int y) {
  const Tensor& xv = at(x).value;
  const Tensor& yv = at(y).value;
  detail::require(xv.rows == yv.rows && xv.cols == yv.cols, "add: shapes differ");
  detail::require(yv.batch == xv.batch || yv.batch == 1, "add: batch mismatch");
  Node n;
  n.op = Op::Add;
  n.a = x;
  n.b = y;
  n.requires_grad = at(x).requires_grad || at(y).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, xv.cols);
  if (yv.batch == xv.batch) {
    n.value.m = xv.m + yv.m;
  } else {
    for (std::size_t b = 0; b < xv.batch; ++b) n.value.block(b) = xv.block(b) + yv.m;
  }
  return push(std::move(n));
}

int Tape::add_col_bias(int x, int b) {
  const Tensor& xv = at(x).value;
  const Tensor& bv = at(b).value;
  detail::require(bv.batch == 1 && bv.cols == 1 && bv.rows == xv.rows,
                  "add_col_bias: bias must be rows x 1");
  Node n;
  n.op = Op::AddColBias;
  n.a = x;
  n.b = b;
  n.requires_grad = at(x).requires_grad || at(b).requires_grad;
  n.value = xv;
  n.value.m.colwise() += bv.m.col(0);
  return push(std::move(n));
}

int Tape::add_row_bias(int x, int b) {
  const Tensor& xv = at(x).value;
  const Tensor& bv = at(b).value;
  detail::require(bv.batch == 1 && bv.rows == 1 && bv.cols == xv.cols,
                  "add_row_bias: bias must be 1 x cols");
  Node n;
  n.op = Op::AddRowBias;
  n.a = x;
  n.b = b;
  n.requires_grad = at(x).requires_grad || at(b).requires_grad;
  n.value = xv;
  for (std::size_t bb = 0; bb < xv.batch; ++bb) n.value.block(bb).rowwise() += bv.m.row(0);
  return push(std::move(n));
}

int Tape::activation(int x, Activation a) {
  const Tensor& xv = at(x).value;
  Node n;
  n.op = Op::ActivationOp;
  n.a = x;
  n.act = a;
  n.requires_grad = at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, xv.cols);
  const Eigen::Index total = xv.m.size();
  const cplx* in = xv.m.data();
  cplx* out = n.value.m.data();
  for (Eigen::Index i = 0; i < total; ++i)
    out[i] = cplx(apply_activation(a, in[i].real()), apply_activation(a, in[i].imag()));
  return push(std::move(n));
}

int Tape::real_part(int x) {
  const Tensor& xv = at(x).value;
  Node n;
  n.op = Op::RealPart;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, xv.rows, xv.cols);
  n.value.m = xv.m.real().cast<cplx>();
  return push(std::move(n));
}

int Tape::scale(int x, cplx alpha) {
  const Tensor& xv = at(x).value;
  Node n;
  n.op = Op::Scale;
  n.a = x;
  n.alpha = alpha;
  n.requires_grad = at(x).requires_grad;
  n.value = xv;
  n.value.m *= alpha;
  return push(std::move(n));
}

int Tape::fft(int x) {
  const Tensor& xv = at(x).value;
  Node n;
  n.op = Op::Fft;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.value = xv;
  for (Eigen::Index c = 0; c < n.value.m.cols(); ++c)
    sno::detail::fft_inplace(n.value.m.col(c).data(), xv.rows, -1);
  return push(std::move(n));
}

int Tape::ifft(int x) {
  const Tensor& xv = at(x).value;
  Node n;
  n.op = Op::Ifft;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.value = xv;
  for (Eigen::Index c = 0; c < n.value.m.cols(); ++c)
    sno::detail::fft_inplace(n.value.m.col(c).data(), xv.rows, +1);
  n.value.m /= static_cast<double>(xv.rows);
  return push(std::move(n));
}

int Tape::dct_analysis(int x) {
  const Tensor& xv = at(x).value;
  detail::require(xv.rows >= 2, "dct_analysis needs at least 2 rows");
  Node n;
  n.op = Op::DctAnalysis;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.value = xv;
  const std::size_t np = xv.rows;
  const double dn = static_cast<double>(np - 1);
  std::vector<double> re, im;
  for (Eigen::Index c = 0; c < n.value.m.cols(); ++c) {
    cplx* col = n.value.m.col(c).data();
    re.assign(np, 0.0);
    im.assign(np, 0.0);
    for (std::size_t j = 0; j < np; ++j) {
      re[j] = col[j].real();
      im[j] = col[j].imag();
    }
    sno::detail::dct1_inplace(re.data(), np);
    sno::detail::dct1_inplace(im.data(), np);
    for (std::size_t j = 0; j < np; ++j) {
      const double p = (j == 0 || j + 1 == np) ? 0.5 : 1.0;
      col[j] = cplx(re[j], im[j]) * (p / dn);
    }
  }
  return push(std::move(n));
}

int Tape::dct_synthesis(int x) {
  const Tensor& xv = at(x).value;
  detail::require(xv.rows >= 2, "dct_synthesis needs at least 2 rows");
  Node n;
  n.op = Op::DctSynthesis;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.value = xv;
  std::vector<double> re, im;
  for (Eigen::Index c = 0; c < n.value.m.cols(); ++c)
    apply_cheb_synthesis(n.value.m.col(c).data(), xv.rows, re, im);
  return push(std::move(n));
}

int Tape::rfft(int x, std::size_t modes) {
  const Tensor& xv = at(x).value;
  detail::require(modes >= 1 && 2 * modes <= xv.rows,
                  "rfft: modes must satisfy 1 <= modes <= rows/2");
  Node n;
  n.op = Op::Rfft;
  n.a = x;
  n.modes = modes;
  n.grid = xv.rows;
  n.requires_grad = at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, modes, xv.cols);
  std::vector<cplx> scratch(xv.rows);
  for (Eigen::Index c = 0; c < xv.m.cols(); ++c) {
    std::memcpy(scratch.data(), xv.m.col(c).data(), xv.rows * sizeof(cplx));
    sno::detail::fft_inplace(scratch.data(), xv.rows, -1);
    std::memcpy(n.value.m.col(c).data(), scratch.data(), modes * sizeof(cplx));
  }
  return push(std::move(n));
}

int Tape::irfft(int x, std::size_t grid) {
  const Tensor& xv = at(x).value;
  const std::size_t modes = xv.rows;
  detail::require(modes >= 1 && 2 * (modes - 1) < grid, "irfft: grid too small for mode count");
  Node n;
  n.op = Op::Irfft;
  n.a = x;
  n.modes = modes;
  n.grid = grid;
  n.requires_grad = at(x).requires_grad;
  n.value = Tensor::zeros(xv.batch, grid, xv.cols);
  std::vector<cplx> scratch(grid);
  for (Eigen::Index c = 0; c < xv.m.cols(); ++c) {
    std::fill(scratch.begin(), scratch.end(), cplx(0.0, 0.0));
    const cplx* in = xv.m.col(c).data();
    scratch[0] = in[0];
    for (std::size_t k = 1; k < modes; ++k) {
      scratch[k] = in[k];
      scratch[grid - k] += std::conj(in[k]);
    }
    sno::detail::fft_inplace(scratch.data(), grid, +1);
    cplx* out = n.value.m.col(c).data();
    const double inv = 1.0 / static_cast<double>(grid);
    for (std::size_t j = 0; j < grid; ++j) out[j] = cplx(scratch[j].real() * inv, 0.0);
  }
  return push(std::move(n));
}

int Tape::rel_l2_mean(int x, Tensor target) {
  const Tensor& xv = at(x).value;
  detail::require(target.batch == xv.batch && target.rows == xv.rows && target.cols == xv.cols,
                  "rel_l2_mean: target shape differs from prediction");
  Node n;
  n.op = Op::RelL2Mean;
  n.a = x;
  n.requires_grad = at(x).requires_grad;
  n.aux = std::move(target);
  n.value = Tensor::zeros(1, 1, 1);
  double loss = 0.0;
  for (std::size_t b = 0; b < xv.batch; ++b) {
    const double r = (xv.block(b) - n.aux.block(b)).norm();
    const double t = n.aux.block(b).norm();
    detail::require(t > 0.0, "rel_l2_mean: zero-norm target");
    loss += r / t;
  }
  n.value.m(0, 0) = loss / static_cast<double>(xv.batch);
  return push(std::move(n));
}

const Tensor& Tape::value(int node) const { return at(node).value; }

const Tensor& Tape::adjoint(int node) const { return at(node).adjoint; }

double Tape::scalar(int node) const {
  const Tensor& v = at(node).value;
  detail::require(v.size() == 1, "scalar() on a non-scalar node");
  return v.m(0, 0).real();
}

void Tape::backward(int node) {
  detail::require(at(node).value.size() == 1, "backward seed must be scalar");
  for (Node& n : nodes_) {
    n.adjoint = Tensor::zeros(n.value.batch, n.value.rows, n.value.cols);
    n.touched = false;
  }
  at(node).adjoint.m(0, 0) = 1.0;
  at(node).touched = true;
  for (int i = node; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.touched || !n.requires_grad || n.op == Op::Leaf) continue;
    propagate(n);
  }
}

void Tape::propagate(Node& n) {
  const Tensor& w = n.adjoint;
  auto want = [this](int id) { return id >= 0 && at(id).requires_grad; };
  auto touch = [this](int id) { at(id).touched = true; };

  switch (n.op) {
    case Op::Leaf:
      return;
    case Op::MatmulRight: {
      const Tensor& xv = at(n.a).value;
      const Tensor& wv = at(n.b).value;
      if (want(n.a)) {
        Tensor& xa = at(n.a).adjoint;
        for (std::size_t b = 0; b < xv.batch; ++b) {
          if (n.transpose_w)
            xa.block(b).noalias() += w.block(b) * wv.m.conjugate();
          else
            xa.block(b).noalias() += w.block(b) * wv.m.adjoint();
        }
        touch(n.a);
      }
      if (want(n.b)) {
        Tensor& wa = at(n.b).adjoint;
        for (std::size_t b = 0; b < xv.batch; ++b) {
          if (n.transpose_w)
            wa.m.noalias() += w.block(b).transpose() * xv.block(b).conjugate();
          else
            wa.m.noalias() += xv.block(b).adjoint() * w.block(b);
        }
        touch(n.b);
      }
      return;
    }
    case Op::MatmulLeft: {
      const Tensor& mv = at(n.a).value;
      const Tensor& xv = at(n.b).value;
      if (want(n.a)) {
        at(n.a).adjoint.m.noalias() += w.m * xv.m.adjoint();
        touch(n.a);
      }
      if (want(n.b)) {
        at(n.b).adjoint.m.noalias() += mv.m.adjoint() * w.m;
        touch(n.b);
      }
      return;
    }
    case Op::MatmulAxis: {
      const Tensor& mv = at(n.a).value;
      const Tensor& xv = at(n.b).value;
      const Eigen::Index r0 = static_cast<Eigen::Index>(n.r0);
      const Eigen::Index r1 = static_cast<Eigen::Index>(n.r1);
      for (Eigen::Index c = 0; c < xv.m.cols(); ++c) {
        Eigen::Map<const Eigen::MatrixXcd> X(xv.m.col(c).data(), r0, r1);
        Eigen::Map<const Eigen::MatrixXcd> W(w.m.col(c).data(), r0, r1);
        if (want(n.a)) {
          if (n.axis == 0)
            at(n.a).adjoint.m.noalias() += W * X.adjoint();
          else
            at(n.a).adjoint.m.noalias() += W.transpose() * X.conjugate();
        }
        if (want(n.b)) {
          Eigen::Map<Eigen::MatrixXcd> XA(at(n.b).adjoint.m.col(c).data(), r0, r1);
          if (n.axis == 0)
            XA.noalias() += mv.m.adjoint() * W;
          else
            XA.noalias() += W * mv.m.conjugate();
        }
      }
      if (want(n.a)) touch(n.a);
      if (want(n.b)) touch(n.b);
      return;
    }
    case Op::ModeMatmul: {
      const Tensor& xv = at(n.a).value;
      const Tensor& rv = at(n.b).value;
      for (std::size_t b = 0; b < xv.batch; ++b) {
        for (std::size_t k = 0; k < xv.rows; ++k) {
          const Eigen::Index ki = static_cast<Eigen::Index>(k);
          if (want(n.a))
            at(n.a).adjoint.block(b).row(ki).noalias() +=
                w.block(b).row(ki) * rv.block(k).adjoint();
          if (want(n.b))
            at(n.b).adjoint.block(k).noalias() +=
                xv.block(b).row(ki).adjoint() * w.block(b).row(ki);
        }
      }
      if (want(n.a)) touch(n.a);
      if (want(n.b)) touch(n.b);
      return;
    }
    case Op::Add: {
      if (want(n.a)) {
        at(n.a).adjoint.m += w.m;
        touch(n.a);
      }
      if (want(n.b)) {
        Tensor& ya = at(n.b).adjoint;
        if (ya.batch == w.batch) {
          ya.m += w.m;
        } else {
          for (std::size_t b = 0; b < w.batch; ++b) ya.m += w.block(b);
        }
        touch(n.b);
      }
      return;
    }
    case Op::AddColBias: {
      if (want(n.a)) {
        at(n.a).adjoint.m += w.m;
        touch(n.a);
      }
      if (want(n.b)) {
        at(n.b).adjoint.m.col(0) += w.m.rowwise().sum();
        touch(n.b);
      }
      return;
    }
    case Op::AddRowBias: {
      if (want(n.a)) {
        at(n.a).adjoint.m += w.m;
        touch(n.a);
      }
      if (want(n.b)) {
        Tensor& ba = at(n.b).adjoint;
        for (std::size_t b = 0; b < w.batch; ++b) ba.m.row(0) += w.block(b).colwise().sum();
        touch(n.b);
      }
      return;
    }
    case Op::ActivationOp: {
      if (!want(n.a)) return;
      const Tensor& xv = at(n.a).value;
      Tensor& xa = at(n.a).adjoint;
      const Eigen::Index total = xv.m.size();
      const cplx* in = xv.m.data();
      const cplx* wd = w.m.data();
      cplx* out = xa.m.data();
      for (Eigen::Index i = 0; i < total; ++i) {
        out[i] += cplx(wd[i].real() * activation_derivative(n.act, in[i].real()),
                       wd[i].imag() * activation_derivative(n.act, in[i].imag()));
      }
      touch(n.a);
      return;
    }
    case Op::RealPart: {
      if (!want(n.a)) return;
      at(n.a).adjoint.m += w.m.real().cast<cplx>();
      touch(n.a);
      return;
    }
    case Op::Scale: {
      if (!want(n.a)) return;
      at(n.a).adjoint.m += std::conj(n.alpha) * w.m;
      touch(n.a);
      return;
    }
    case Op::Fft: {
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      std::vector<cplx> scratch(n.value.rows);
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        std::memcpy(scratch.data(), w.m.col(c).data(), n.value.rows * sizeof(cplx));
        sno::detail::fft_inplace(scratch.data(), n.value.rows, +1);
        for (std::size_t j = 0; j < n.value.rows; ++j)
          xa.m(static_cast<Eigen::Index>(j), c) += scratch[j];
      }
      touch(n.a);
      return;
    }
    case Op::Ifft: {
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      const double inv = 1.0 / static_cast<double>(n.value.rows);
      std::vector<cplx> scratch(n.value.rows);
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        std::memcpy(scratch.data(), w.m.col(c).data(), n.value.rows * sizeof(cplx));
        sno::detail::fft_inplace(scratch.data(), n.value.rows, -1);
        for (std::size_t j = 0; j < n.value.rows; ++j)
          xa.m(static_cast<Eigen::Index>(j), c) += scratch[j] * inv;
      }
      touch(n.a);
      return;
    }
    case Op::DctAnalysis: {
      // adjoint apply: (1/n) diag(w_dct) S diag(p') with w_dct = (1,2,..,2,1).
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      const std::size_t np = n.value.rows;
      const double dn = static_cast<double>(np - 1);
      std::vector<cplx> scratch(np);
      std::vector<double> re, im;
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        const cplx* wc = w.m.col(c).data();
        for (std::size_t j = 0; j < np; ++j) {
          const double p = (j == 0 || j + 1 == np) ? 0.5 : 1.0;
          scratch[j] = wc[j] * p;
        }
        apply_cheb_synthesis(scratch.data(), np, re, im);
        for (std::size_t j = 0; j < np; ++j) {
          const double wd = (j == 0 || j + 1 == np) ? 1.0 : 2.0;
          xa.m(static_cast<Eigen::Index>(j), c) += scratch[j] * (wd / dn);
        }
      }
      touch(n.a);
      return;
    }
    case Op::DctSynthesis: {
      // S is symmetric real, so the adjoint is S again.
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      const std::size_t np = n.value.rows;
      std::vector<cplx> scratch(np);
      std::vector<double> re, im;
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        std::memcpy(scratch.data(), w.m.col(c).data(), np * sizeof(cplx));
        apply_cheb_synthesis(scratch.data(), np, re, im);
        for (std::size_t j = 0; j < np; ++j)
          xa.m(static_cast<Eigen::Index>(j), c) += scratch[j];
      }
      touch(n.a);
      return;
    }
    case Op::Rfft: {
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      std::vector<cplx> scratch(n.grid);
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        std::fill(scratch.begin(), scratch.end(), cplx(0.0, 0.0));
        std::memcpy(scratch.data(), w.m.col(c).data(), n.modes * sizeof(cplx));
        sno::detail::fft_inplace(scratch.data(), n.grid, +1);
        for (std::size_t j = 0; j < n.grid; ++j)
          xa.m(static_cast<Eigen::Index>(j), c) += scratch[j];
      }
      touch(n.a);
      return;
    }
    case Op::Irfft: {
      // out = Re(A x) with A_{jk} = (2 - delta_{k0}) e^{2 pi i jk/m} / m, so
      // x_hat += A^H Re(w).
      if (!want(n.a)) return;
      Tensor& xa = at(n.a).adjoint;
      const double inv = 1.0 / static_cast<double>(n.grid);
      std::vector<cplx> scratch(n.grid);
      for (Eigen::Index c = 0; c < w.m.cols(); ++c) {
        const cplx* wc = w.m.col(c).data();
        for (std::size_t j = 0; j < n.grid; ++j) scratch[j] = cplx(wc[j].real(), 0.0);
        sno::detail::fft_inplace(scratch.data(), n.grid, -1);
        for (std::size_t k = 0; k < n.modes; ++k) {
          const double f = (k == 0 ? 1.0 : 2.0) * inv;
          xa.m(static_cast<Eigen::Index>(k), c) += scratch[k] * f;
        }
      }
      touch(n.a);
      return;
    }
    case Op::RelL2Mean: {
      if (!want(n.a)) return;
      const Tensor& xv = at(n.a).value;
      Tensor& xa = at(n.a).adjoint;
      const double g = w.m(0, 0).real() / static_cast<double>(xv.batch);
      for (std::size_t b = 0; b < xv.batch; ++b) {
        const Eigen::MatrixXcd r = xv.block(b) - n.aux.block(b);
        const double rn = r.norm();
        if (rn == 0.0) continue;
        const double tn = n.aux.block(b).norm();
        xa.block(b) += (g / (rn * tn)) * r;
      }
      touch(n.a);
      return;
    }
  }
}

}  // namespace sno::ad
