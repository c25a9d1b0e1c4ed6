#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "sno/aliasing.hpp"

namespace sno::ad {

using cplx = std::complex<double>;

// Batched complex tensor [batch, rows, cols]. Storage is a single column-major
// rows x (batch*cols) matrix; batch element b occupies the contiguous column
// block [b*cols, (b+1)*cols). Transform ops act along rows, weight
// contractions along cols, so both map onto whole-matrix Eigen kernels.
struct Tensor {
  std::size_t batch = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Eigen::MatrixXcd m;

  static Tensor zeros(std::size_t batch, std::size_t rows, std::size_t cols);

  std::size_t size() const { return batch * rows * cols; }
  auto block(std::size_t b) { return m.middleCols(static_cast<Eigen::Index>(b * cols),
                                                  static_cast<Eigen::Index>(cols)); }
  auto block(std::size_t b) const {
    return m.middleCols(static_cast<Eigen::Index>(b * cols), static_cast<Eigen::Index>(cols));
  }
};

// Reverse-mode tape over Tensor nodes. Values are computed eagerly at node
// creation, so creation order is a topological order; backward() walks it in
// reverse exactly once. Adjoint convention: for a real loss L, a node's
// adjoint entry is dL/dRe + i dL/dIm, which makes C-linear ops propagate via
// the conjugate transpose and keeps split real/imag activations independent.
class Tape {
 public:
  int constant(Tensor v);
  int parameter(Tensor v);

  // y[b] = x[b] * W, or x[b] * W^T with transpose_w. W must have batch 1
  // (it may be any node, not only a leaf).
  int matmul(int x, int w, bool transpose_w = false);
  // y[b] = M * x[b]; one whole-matrix product over the batch. M batch 1.
  int lmatmul(int m, int x);
  // Rows of x viewed as an (r0, r1) grid with axis-0 index fastest; applies
  // the square matrix M along the chosen axis of that grid.
  int lmatmul_axis(int m, int x, std::size_t r0, std::size_t r1, int axis);
  // Per-row channel mixing: y[b](k,:) = x[b](k,:) * R[k] with R batch = rows.
  int mode_matmul(int x, int r);

  int add(int x, int y);           // same shape; y with batch 1 broadcasts
  int add_col_bias(int x, int b);  // b is rows x 1, added to every column
  int add_row_bias(int x, int b);  // b is 1 x cols, added to every row
  int activation(int x, Activation a);  // sigma(Re x) + i sigma(Im x)
  int real_part(int x);
  int scale(int x, cplx alpha);

  // Along rows, per column: unnormalized DFT y_k = sum_j x_j w^{jk},
  // w = e^{-2 pi i / rows}, and its normalized inverse.
  int fft(int x);
  int ifft(int x);
  // Chebyshev value <-> coefficient maps on the rows-1 degree grid. The
  // synthesis matrix S_jk = cos(pi j k / n) is symmetric; analysis is its
  // scaled inverse. Both applied to re/im parts independently (real matrices).
  int dct_analysis(int x);
  int dct_synthesis(int x);
  // First `modes` bins of the unnormalized DFT (modes <= rows/2 so the kept
  // band has no Nyquist ambiguity).
  int rfft(int x, std::size_t modes);
  // Real signal of `grid` samples from one-sided modes via Hermitian
  // completion; output imag parts are exactly zero.
  int irfft(int x, std::size_t grid);

  // mean_b ||x[b] - target[b]||_F / ||target[b]||_F as a 1x1x1 node.
  // Throws if any target slice has zero norm.
  int rel_l2_mean(int x, Tensor target);

  const Tensor& value(int node) const;
  const Tensor& adjoint(int node) const;
  double scalar(int node) const;

  // Seeds dL/dRe = 1 at a scalar node and accumulates adjoints for every
  // node on a path from a parameter to it.
  void backward(int node);

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op {
    Leaf,
    MatmulRight,
    MatmulLeft,
    MatmulAxis,
    ModeMatmul,
    Add,
    AddColBias,
    AddRowBias,
    ActivationOp,
    RealPart,
    Scale,
    Fft,
    Ifft,
    DctAnalysis,
    DctSynthesis,
    Rfft,
    Irfft,
    RelL2Mean,
  };

  struct Node {
    Op op = Op::Leaf;
    int a = -1;
    int b = -1;
    Tensor value;
    Tensor adjoint;
    bool requires_grad = false;
    bool touched = false;
    bool transpose_w = false;
    Activation act = Activation::Identity;
    std::size_t r0 = 0, r1 = 0;
    int axis = 0;
    std::size_t modes = 0, grid = 0;
    cplx alpha{1.0, 0.0};
    Tensor aux;  // rel_l2_mean target
  };

  int push(Node n);
  void propagate(Node& n);
  Node& at(int id);
  const Node& at(int id) const;

  std::vector<Node> nodes_;
};

}  // namespace sno::ad
