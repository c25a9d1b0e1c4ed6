#include "sno/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "sno/errors.hpp"

namespace sno {

namespace {

// Serialized FFTW plan cache. FFTW's planner is not thread-safe and desk-scale
// transforms are cheap, so one mutex guards both planning and execution.
class FftwEngine {
 public:
  static FftwEngine& instance() {
    static FftwEngine e;
    return e;
  }

  // In-place DCT-I (REDFT00) of n real values, unnormalized as in FFTW.
  void dct1(double* data, std::size_t n) {
    std::scoped_lock lock(mu_);
    auto& entry = dct_plans_[n];
    if (!entry.plan) {
      entry.buf = fftw_alloc_real(n);
      entry.plan = fftw_plan_r2r_1d(static_cast<int>(n), entry.buf, entry.buf,
                                    FFTW_REDFT00, FFTW_ESTIMATE);
      detail::numeric_check(entry.plan != nullptr, "fftw: REDFT00 planning failed");
    }
    std::memcpy(entry.buf, data, n * sizeof(double));
    fftw_execute(entry.plan);
    std::memcpy(data, entry.buf, n * sizeof(double));
  }

  // In-place complex DFT of m values; sign -1 forward, +1 backward, unnormalized.
  void fft(cplx* data, std::size_t m, int sign) {
    std::scoped_lock lock(mu_);
    auto& entry = fft_plans_[{m, sign}];
    if (!entry.plan) {
      entry.cbuf = fftw_alloc_complex(m);
      entry.plan = fftw_plan_dft_1d(static_cast<int>(m), entry.cbuf, entry.cbuf,
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
      detail::numeric_check(entry.plan != nullptr, "fftw: DFT planning failed");
    }
    // std::complex<double> is layout-compatible with fftw_complex (C array of 2)
    std::memcpy(static_cast<void*>(entry.cbuf), static_cast<const void*>(data),
                m * sizeof(fftw_complex));
    fftw_execute(entry.plan);
    std::memcpy(static_cast<void*>(data), static_cast<const void*>(entry.cbuf),
                m * sizeof(fftw_complex));
  }

 private:
  struct Entry {
    fftw_plan plan = nullptr;
    double* buf = nullptr;
    fftw_complex* cbuf = nullptr;
  };
  std::mutex mu_;
  std::map<std::size_t, Entry> dct_plans_;
  std::map<std::pair<std::size_t, int>, Entry> fft_plans_;
};

double parity_sign(long long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// DCT-I on a complex line: real and imaginary parts transformed separately.
void dct1_complex(cplx* line, std::size_t n) {
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = line[i].real();
    im[i] = line[i].imag();
  }
  FftwEngine::instance().dct1(re.data(), n);
  FftwEngine::instance().dct1(im.data(), n);
  for (std::size_t i = 0; i < n; ++i) line[i] = {re[i], im[i]};
}

// Line kernels. Each maps a contiguous line of `len_in` entries to `len_out`.

void cheb_analysis_line(const cplx* in, std::size_t len_in, cplx* out) {
  const std::size_t n = len_in - 1;  // polynomial degree
  std::vector<cplx> work(in, in + len_in);
  if (len_in == 1) {
    out[0] = in[0];
    return;
  }
  dct1_complex(work.data(), len_in);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j <= n; ++j) {
    double scale = (j == 0 || j == n) ? 0.5 * inv_n : inv_n;
    out[j] = work[j] * scale;
  }
}

// Exact sampling of a Chebyshev series on cheb_points(pts-1): T_k folds onto
// the coarse grid as k mod 2n with reflection above n.
void cheb_synthesis_line(const cplx* in, std::size_t len_in, cplx* out, std::size_t pts) {
  const std::size_t n = pts - 1;
  std::vector<cplx> folded(pts, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < len_in; ++k) {
    std::size_t r = k % (2 * n);
    if (r > n) r = 2 * n - r;
    folded[r] += in[k];
  }
  // REDFT00 with halved interior coefficients reproduces sum c_j cos(j k pi / n).
  for (std::size_t j = 1; j + 1 <= n; ++j) folded[j] *= 0.5;
  dct1_complex(folded.data(), pts);
  std::copy(folded.begin(), folded.end(), out);
}

void fourier_analysis_line(const cplx* in, std::size_t m, cplx* out, bool packed) {
  std::vector<cplx> work(in, in + m);
  if (m > 1) FftwEngine::instance().fft(work.data(), m, -1);
  const double inv_m = 1.0 / static_cast<double>(m);
  if (!packed) {
    for (std::size_t t = 0; t < m; ++t)
      out[t] = work[t] * (parity_sign(fft_signed_harmonic(t, m)) * inv_m);
    return;
  }
  const std::size_t K = m / 2;
  for (std::size_t k = 0; k <= K; ++k)
    out[k] = work[k] * (parity_sign(static_cast<long long>(k)) * inv_m);
  // Even grids share the Nyquist bin between +K and -K; the stored pair
  // convention splits it evenly.
  if (m % 2 == 0 && m > 1) out[K] *= 0.5;
}

// Exact sampling on any uniform grid size via modular folding of harmonics.
void fourier_synthesis_line(const cplx* in, std::size_t len_in, cplx* out, std::size_t m,
                            bool packed) {
  std::vector<cplx> bins(m, cplx{0.0, 0.0});
  auto fold_add = [&](long long k, cplx amplitude) {
    long long r = k % static_cast<long long>(m);
    if (r < 0) r += static_cast<long long>(m);
    bins[static_cast<std::size_t>(r)] += amplitude * parity_sign(k);
  };
  if (packed) {
    fold_add(0, in[0]);
    for (std::size_t k = 1; k < len_in; ++k) {
      fold_add(static_cast<long long>(k), in[k]);
      fold_add(-static_cast<long long>(k), std::conj(in[k]));
    }
  } else {
    for (std::size_t t = 0; t < len_in; ++t)
      fold_add(fft_signed_harmonic(t, len_in), in[t]);
  }
  if (m > 1) FftwEngine::instance().fft(bins.data(), m, +1);
  std::copy(bins.begin(), bins.end(), out);
}

std::size_t line_coeff_out(const AxisBasis& ab, std::size_t pts) {
  return coeff_count_for_grid(ab, pts);
}

// Applies a per-line kernel along `axis` of a rank-1/2 row-major tensor.
template <typename Kernel>
std::vector<cplx> apply_axis(const std::vector<cplx>& data,
                             const std::vector<std::size_t>& shape, std::size_t axis,
                             std::size_t len_out, Kernel&& kernel) {
  std::vector<std::size_t> out_shape = shape;
  out_shape[axis] = len_out;
  std::size_t total = 1;
  for (std::size_t s : out_shape) total *= s;
  std::vector<cplx> out(total);
  if (shape.size() == 1) {
    kernel(data.data(), shape[0], out.data());
    return out;
  }
  const std::size_t rows = shape[0], cols = shape[1];
  if (axis == 1) {
    for (std::size_t r = 0; r < rows; ++r)
      kernel(data.data() + r * cols, cols, out.data() + r * len_out);
    return out;
  }
  std::vector<cplx> line_in(rows), line_out(len_out);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) line_in[r] = data[r * cols + c];
    kernel(line_in.data(), rows, line_out.data());
    for (std::size_t r = 0; r < len_out; ++r) out[r * cols + c] = line_out[r];
  }
  return out;
}

void check_real_lines(const std::vector<cplx>& data) {
  double scale = 1.0;
  for (const cplx& v : data) scale = std::max(scale, std::abs(v));
  for (const cplx& v : data)
    detail::require(std::abs(v.imag()) <= 1e-9 * scale,
                    "fourier_analysis: packed (real-signal) mode requires real input");
}

}  // namespace

CoeffSeries cheb_analysis(const GridFunction& g) {
  validate(g);
  detail::require(g.rank() == 1, "cheb_analysis: grid is not 1D");
  detail::require(g.grids[0] == GridKind::Chebyshev, "cheb_analysis: not a Chebyshev grid");
  detail::require(g.shape[0] >= 2, "cheb_analysis: need at least 2 nodes");
  return analyze(g, {AxisBasis{BasisKind::Chebyshev}});
}

GridFunction cheb_synthesis(const CoeffSeries& s, std::size_t num_points) {
  validate(s);
  detail::require(s.rank() == 1, "cheb_synthesis: series is not 1D");
  detail::require(s.axes[0].kind == BasisKind::Chebyshev, "cheb_synthesis: not Chebyshev");
  if (num_points == 0) num_points = natural_grid_size(s.axes[0], s.shape[0]);
  return interpolate_to_grid(s, {num_points}, {GridKind::Chebyshev});
}

CoeffSeries fourier_analysis(const GridFunction& g, bool real_signal) {
  validate(g);
  detail::require(g.rank() == 1, "fourier_analysis: grid is not 1D");
  detail::require(g.grids[0] == GridKind::Uniform, "fourier_analysis: not a uniform grid");
  return analyze(g, {AxisBasis{BasisKind::Fourier, real_signal}});
}

GridFunction fourier_synthesis(const CoeffSeries& s, std::size_t num_points) {
  validate(s);
  detail::require(s.rank() == 1, "fourier_synthesis: series is not 1D");
  detail::require(s.axes[0].kind == BasisKind::Fourier, "fourier_synthesis: not Fourier");
  if (num_points == 0) num_points = natural_grid_size(s.axes[0], s.shape[0]);
  return interpolate_to_grid(s, {num_points}, {GridKind::Uniform});
}

CoeffSeries analyze(const GridFunction& g, const std::vector<AxisBasis>& axes) {
  validate(g);
  detail::require(axes.size() == g.rank(), "analyze: one basis per axis required");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    bool cheb = axes[a].kind == BasisKind::Chebyshev;
    detail::require(cheb == (g.grids[a] == GridKind::Chebyshev),
                    "analyze: grid kind does not match basis kind");
    if (cheb) detail::require(g.shape[a] >= 2, "analyze: Chebyshev axis needs >= 2 nodes");
  }
  std::vector<cplx> data = g.values;
  std::vector<std::size_t> shape = g.shape;
  // Innermost axis first; DCT rows are real so packing along any single
  // Fourier axis commutes with the other transforms.
  for (std::size_t a = g.rank(); a-- > 0;) {
    const AxisBasis& ab = axes[a];
    std::size_t len_out = line_coeff_out(ab, shape[a]);
    if (ab.kind == BasisKind::Chebyshev) {
      data = apply_axis(data, shape, a, len_out,
                        [](const cplx* in, std::size_t n, cplx* out) {
                          cheb_analysis_line(in, n, out);
                        });
    } else {
      bool check_meaningful = true;  // later axes already transformed; DCT keeps lines real
      for (std::size_t b = a + 1; b < g.rank(); ++b)
        if (axes[b].kind != BasisKind::Chebyshev) check_meaningful = false;
      if (ab.real_signal && check_meaningful) check_real_lines(data);
      data = apply_axis(data, shape, a, len_out,
                        [&](const cplx* in, std::size_t n, cplx* out) {
                          fourier_analysis_line(in, n, out, ab.real_signal);
                        });
    }
    shape[a] = len_out;
  }
  CoeffSeries out;
  out.axes = axes;
  out.shape = shape;
  out.coeffs = std::move(data);
  validate(out);
  return out;
}

GridFunction synthesize(const CoeffSeries& s, std::vector<std::size_t> shape) {
  validate(s);
  if (shape.empty()) {
    shape.resize(s.rank());
    for (std::size_t a = 0; a < s.rank(); ++a)
      shape[a] = natural_grid_size(s.axes[a], s.shape[a]);
  }
  std::vector<GridKind> kinds(s.rank());
  for (std::size_t a = 0; a < s.rank(); ++a)
    kinds[a] = s.axes[a].kind == BasisKind::Chebyshev ? GridKind::Chebyshev : GridKind::Uniform;
  return interpolate_to_grid(s, shape, kinds);
}

GridFunction interpolate_to_grid(const CoeffSeries& s, const std::vector<std::size_t>& shape,
                                 const std::vector<GridKind>& kinds) {
  validate(s);
  detail::require(shape.size() == s.rank() && kinds.size() == s.rank(),
                  "interpolate_to_grid: shape/kind rank mismatch");
  for (std::size_t a = 0; a < s.rank(); ++a) {
    bool cheb = s.axes[a].kind == BasisKind::Chebyshev;
    detail::require(cheb == (kinds[a] == GridKind::Chebyshev),
                    "interpolate_to_grid: grid kind does not match basis kind");
    detail::require(shape[a] >= (cheb ? 2u : 1u), "interpolate_to_grid: grid too small");
  }
  std::vector<cplx> data = s.coeffs;
  std::vector<std::size_t> cur = s.shape;
  for (std::size_t a = 0; a < s.rank(); ++a) {
    const AxisBasis& ab = s.axes[a];
    std::size_t pts = shape[a];
    if (ab.kind == BasisKind::Chebyshev) {
      data = apply_axis(data, cur, a, pts,
                        [&](const cplx* in, std::size_t n, cplx* out) {
                          cheb_synthesis_line(in, n, out, pts);
                        });
    } else {
      data = apply_axis(data, cur, a, pts,
                        [&](const cplx* in, std::size_t n, cplx* out) {
                          fourier_synthesis_line(in, n, out, pts, ab.real_signal);
                        });
    }
    cur[a] = pts;
  }
  GridFunction out;
  out.grids = kinds;
  out.shape = cur;
  out.values = std::move(data);
  validate(out);
  return out;
}

GridFunction subsample(const GridFunction& g, const std::vector<std::size_t>& step) {
  validate(g);
  detail::require(step.size() == g.rank(), "subsample: one step per axis required");
  std::vector<std::size_t> out_shape(g.rank());
  for (std::size_t a = 0; a < g.rank(); ++a) {
    detail::require(step[a] >= 1, "subsample: step must be >= 1");
    if (g.grids[a] == GridKind::Uniform) {
      detail::require(g.shape[a] % step[a] == 0,
                      "subsample: uniform axis size must be divisible by step");
      out_shape[a] = g.shape[a] / step[a];
    } else {
      detail::require((g.shape[a] - 1) % step[a] == 0,
                      "subsample: Chebyshev axis (n-1) must be divisible by step");
      out_shape[a] = (g.shape[a] - 1) / step[a] + 1;
    }
  }
  GridFunction out = GridFunction::zeros(g.grids, out_shape);
  if (g.rank() == 1) {
    for (std::size_t i = 0; i < out_shape[0]; ++i) out.values[i] = g.values[i * step[0]];
    return out;
  }
  for (std::size_t i = 0; i < out_shape[0]; ++i)
    for (std::size_t j = 0; j < out_shape[1]; ++j)
      out.values[i * out_shape[1] + j] = g.values[i * step[0] * g.shape[1] + j * step[1]];
  return out;
}

namespace detail {

void fft_inplace(cplx* data, std::size_t m, int sign) {
  if (m > 1) FftwEngine::instance().fft(data, m, sign);
}

void dct1_inplace(double* data, std::size_t num_points) {
  if (num_points > 1) FftwEngine::instance().dct1(data, num_points);
}

}  // namespace detail

}  // namespace sno
