#include "sno/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sno/errors.hpp"

namespace sno {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

// Evaluates one coefficient line (stride-spaced) at a point.
cplx eval_line(const cplx* c, std::size_t n, std::size_t stride, const AxisBasis& axis,
               double x) {
  if (axis.kind == BasisKind::Chebyshev) {
    // Clenshaw recurrence, valid for complex coefficients.
    cplx b1{0.0, 0.0}, b2{0.0, 0.0};
    for (std::size_t j = n; j-- > 1;) {
      cplx b0 = c[j * stride] + 2.0 * x * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return c[0] + x * b1 - b2;
  }
  if (axis.real_signal) {
    cplx acc = c[0];
    for (std::size_t k = 1; k < n; ++k) {
      cplx ph = std::polar(1.0, kPi * static_cast<double>(k) * x);
      acc += c[k * stride] * ph + std::conj(c[k * stride]) * std::conj(ph);
    }
    return acc;
  }
  cplx acc{0.0, 0.0};
  for (std::size_t t = 0; t < n; ++t) {
    long long k = fft_signed_harmonic(t, n);
    acc += c[t * stride] * std::polar(1.0, kPi * static_cast<double>(k) * x);
  }
  return acc;
}

}  // namespace

std::size_t CoeffSeries::size() const { return product(shape); }
std::size_t GridFunction::size() const { return product(shape); }

CoeffSeries CoeffSeries::zeros(std::vector<AxisBasis> axes, std::vector<std::size_t> shape) {
  CoeffSeries s;
  s.axes = std::move(axes);
  s.shape = std::move(shape);
  s.coeffs.assign(product(s.shape), cplx{0.0, 0.0});
  validate(s);
  return s;
}

CoeffSeries CoeffSeries::d1(AxisBasis axis, std::vector<cplx> coeffs) {
  CoeffSeries s;
  s.axes = {axis};
  s.shape = {coeffs.size()};
  s.coeffs = std::move(coeffs);
  validate(s);
  return s;
}

GridFunction GridFunction::zeros(std::vector<GridKind> grids, std::vector<std::size_t> shape) {
  GridFunction g;
  g.grids = std::move(grids);
  g.shape = std::move(shape);
  g.values.assign(product(g.shape), cplx{0.0, 0.0});
  validate(g);
  return g;
}

GridFunction GridFunction::d1(GridKind kind, std::vector<cplx> values) {
  GridFunction g;
  g.grids = {kind};
  g.shape = {values.size()};
  g.values = std::move(values);
  validate(g);
  return g;
}

void validate(const CoeffSeries& s) {
  detail::require(s.rank() >= 1 && s.rank() <= 2, "CoeffSeries: rank must be 1 or 2");
  detail::require(s.axes.size() == s.shape.size(), "CoeffSeries: axes/shape mismatch");
  for (std::size_t n : s.shape) detail::require(n >= 1, "CoeffSeries: axis length must be >= 1");
  detail::require(s.coeffs.size() == product(s.shape), "CoeffSeries: data size mismatch");
}

void validate(const GridFunction& g) {
  detail::require(g.rank() >= 1 && g.rank() <= 2, "GridFunction: rank must be 1 or 2");
  detail::require(g.grids.size() == g.shape.size(), "GridFunction: grids/shape mismatch");
  for (std::size_t n : g.shape) detail::require(n >= 1, "GridFunction: axis length must be >= 1");
  detail::require(g.values.size() == product(g.shape), "GridFunction: data size mismatch");
}

std::vector<double> cheb_points(std::size_t n) {
  detail::require(n >= 1, "cheb_points: degree must be >= 1");
  std::vector<double> x(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    x[k] = std::cos(kPi * static_cast<double>(k) / static_cast<double>(n));
  // Pin the endpoints and midpoint exactly.
  x[0] = 1.0;
  x[n] = -1.0;
  if (n % 2 == 0) x[n / 2] = 0.0;
  return x;
}

std::vector<double> uniform_points(std::size_t m) {
  detail::require(m >= 1, "uniform_points: need at least one point");
  std::vector<double> x(m);
  for (std::size_t j = 0; j < m; ++j)
    x[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(m);
  return x;
}

std::size_t natural_grid_size(const AxisBasis& axis, std::size_t coeff_count) {
  if (axis.kind == BasisKind::Chebyshev) return std::max<std::size_t>(coeff_count, 2);
  if (axis.real_signal) return 2 * (coeff_count - 1) + 1;
  return coeff_count;
}

std::size_t coeff_count_for_grid(const AxisBasis& axis, std::size_t grid_points) {
  if (axis.kind == BasisKind::Chebyshev) return grid_points;
  if (axis.real_signal) return grid_points / 2 + 1;
  return grid_points;
}

long long fft_signed_harmonic(std::size_t t, std::size_t m) {
  // Nyquist bin of an even size maps to the positive side, matching the packed
  // convention that stored harmonics are nonnegative.
  return 2 * t <= m ? static_cast<long long>(t)
                    : static_cast<long long>(t) - static_cast<long long>(m);
}

cplx evaluate(const CoeffSeries& s, double x) {
  validate(s);
  detail::require(s.rank() == 1, "evaluate: series is not 1D");
  return eval_line(s.coeffs.data(), s.shape[0], 1, s.axes[0], x);
}

cplx evaluate(const CoeffSeries& s, double x0, double x1) {
  validate(s);
  detail::require(s.rank() == 2, "evaluate: series is not 2D");
  const std::size_t n0 = s.shape[0], n1 = s.shape[1];
  std::vector<cplx> inner(n0);
  for (std::size_t i = 0; i < n0; ++i)
    inner[i] = eval_line(s.coeffs.data() + i * n1, n1, 1, s.axes[1], x1);
  return eval_line(inner.data(), n0, 1, s.axes[0], x0);
}

CoeffSeries differentiate(const CoeffSeries& s) {
  validate(s);
  detail::require(s.rank() == 1, "differentiate: series is not 1D");
  const std::size_t n = s.shape[0];
  if (s.axes[0].kind == BasisKind::Chebyshev) {
    if (n == 1) return CoeffSeries::d1(s.axes[0], {cplx{0.0, 0.0}});
    // Backward recurrence c'_{k-1} = c'_{k+1} + 2 k c_k, then halve c'_0.
    std::vector<cplx> d(n - 1, cplx{0.0, 0.0});
    cplx next{0.0, 0.0}, next2{0.0, 0.0};
    for (std::size_t k = n - 1; k >= 1; --k) {
      cplx cur = next2 + 2.0 * static_cast<double>(k) * s.coeffs[k];
      d[k - 1] = cur;
      next2 = next;
      next = cur;
    }
    d[0] *= 0.5;
    return CoeffSeries::d1(s.axes[0], std::move(d));
  }
  std::vector<cplx> d(n);
  for (std::size_t t = 0; t < n; ++t) {
    long long k = s.axes[0].real_signal ? static_cast<long long>(t)
                                        : fft_signed_harmonic(t, n);
    d[t] = s.coeffs[t] * cplx{0.0, kPi * static_cast<double>(k)};
  }
  return CoeffSeries::d1(s.axes[0], std::move(d));
}

CoeffSeries integrate(const CoeffSeries& s) {
  validate(s);
  detail::require(s.rank() == 1, "integrate: series is not 1D");
  const std::size_t n = s.shape[0];
  if (s.axes[0].kind == BasisKind::Chebyshev) {
    std::vector<cplx> b(n + 1, cplx{0.0, 0.0});
    auto c = [&](std::size_t k) -> cplx {
      return k < n ? s.coeffs[k] : cplx{0.0, 0.0};
    };
    b[1] = c(0) - 0.5 * c(2);
    for (std::size_t k = 2; k <= n; ++k)
      b[k] = (c(k - 1) - c(k + 1)) / (2.0 * static_cast<double>(k));
    // Constant chosen so the antiderivative vanishes at x = -1.
    cplx at_minus1{0.0, 0.0};
    double sign = -1.0;
    for (std::size_t k = 1; k <= n; ++k) {
      at_minus1 += sign * b[k];
      sign = -sign;
    }
    b[0] = -at_minus1;
    return CoeffSeries::d1(s.axes[0], std::move(b));
  }
  double scale = std::max(1.0, max_abs(s));
  detail::require(std::abs(s.coeffs[0]) <= 1e-12 * scale,
                  "integrate: Fourier series has nonzero mean (non-periodic antiderivative)");
  std::vector<cplx> b(n, cplx{0.0, 0.0});
  for (std::size_t t = 1; t < n; ++t) {
    long long k = s.axes[0].real_signal ? static_cast<long long>(t)
                                        : fft_signed_harmonic(t, n);
    if (k == 0) continue;
    b[t] = s.coeffs[t] / cplx{0.0, kPi * static_cast<double>(k)};
  }
  return CoeffSeries::d1(s.axes[0], std::move(b));
}

CoeffSeries shift(const CoeffSeries& s, double delta) {
  validate(s);
  detail::require(s.rank() == 1, "shift: series is not 1D");
  detail::require(s.axes[0].kind == BasisKind::Fourier,
                  "shift: Chebyshev series are not closed under translation");
  const std::size_t n = s.shape[0];
  std::vector<cplx> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    long long k = s.axes[0].real_signal ? static_cast<long long>(t)
                                        : fft_signed_harmonic(t, n);
    out[t] = s.coeffs[t] * std::polar(1.0, kPi * static_cast<double>(k) * delta);
  }
  return CoeffSeries::d1(s.axes[0], std::move(out));
}

CoeffSeries multiply(const CoeffSeries& a, const CoeffSeries& b) {
  validate(a);
  validate(b);
  detail::require(a.rank() == 1 && b.rank() == 1, "multiply: series are not 1D");
  detail::require(a.axes[0] == b.axes[0], "multiply: basis mismatch");
  const std::size_t la = a.shape[0], lb = b.shape[0];
  const std::size_t lo = la + lb - 1;
  if (a.axes[0].kind == BasisKind::Chebyshev) {
    std::vector<cplx> out(lo, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < la; ++i)
      for (std::size_t j = 0; j < lb; ++j) {
        cplx half = 0.5 * a.coeffs[i] * b.coeffs[j];
        out[i + j] += half;
        out[i >= j ? i - j : j - i] += half;
      }
    return CoeffSeries::d1(a.axes[0], std::move(out));
  }
  if (a.axes[0].real_signal) {
    // Convolve the implicit two-sided Hermitian spectra; the product spectrum
    // is Hermitian again, so only k >= 0 is kept.
    const long long Ka = static_cast<long long>(la) - 1;
    const long long Kb = static_cast<long long>(lb) - 1;
    const long long Ko = Ka + Kb;
    auto side = [](const CoeffSeries& s, long long k) -> cplx {
      if (k >= 0) return s.coeffs[static_cast<std::size_t>(k)];
      return std::conj(s.coeffs[static_cast<std::size_t>(-k)]);
    };
    std::vector<cplx> out(static_cast<std::size_t>(Ko) + 1, cplx{0.0, 0.0});
    for (long long k = 0; k <= Ko; ++k) {
      cplx acc{0.0, 0.0};
      for (long long i = -Ka; i <= Ka; ++i) {
        long long j = k - i;
        if (j < -Kb || j > Kb) continue;
        acc += side(a, i) * side(b, j);
      }
      out[static_cast<std::size_t>(k)] = acc;
    }
    return CoeffSeries::d1(a.axes[0], std::move(out));
  }
  // Full-spectrum convolution over signed harmonics. The output window is the
  // balanced layout of size la + lb - 1; summands landing outside it cannot
  // occur because convolution support is contained in the summed ranges.
  std::vector<cplx> out(lo, cplx{0.0, 0.0});
  for (std::size_t ta = 0; ta < la; ++ta)
    for (std::size_t tb = 0; tb < lb; ++tb) {
      long long k = fft_signed_harmonic(ta, la) + fft_signed_harmonic(tb, lb);
      long long kmax = static_cast<long long>(lo) / 2;
      long long kmin = kmax - static_cast<long long>(lo) + 1;
      detail::require(k >= kmin && k <= kmax,
                      "multiply: product harmonic outside balanced window");
      std::size_t t = k >= 0 ? static_cast<std::size_t>(k)
                             : static_cast<std::size_t>(k + static_cast<long long>(lo));
      out[t] += a.coeffs[ta] * b.coeffs[tb];
    }
  return CoeffSeries::d1(a.axes[0], std::move(out));
}

CoeffSeries chop(const CoeffSeries& s, std::size_t n, std::size_t axis) {
  validate(s);
  detail::require(axis < s.rank(), "chop: axis out of range");
  detail::require(n >= 1, "chop: need at least one coefficient");
  const std::size_t cur = s.shape[axis];
  detail::require(n <= cur, "chop: target longer than input (use pad)");
  const AxisBasis& ab = s.axes[axis];
  CoeffSeries out = s;
  out.shape[axis] = n;
  out.coeffs.assign(out.size(), cplx{0.0, 0.0});
  const std::size_t inner = axis + 1 < s.rank() ? s.shape[axis + 1] : 1;
  const std::size_t outer = axis == 0 ? 1 : s.shape[0];
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t t = 0; t < n; ++t) {
      // For full-spectrum Fourier the retained harmonics are those of the
      // balanced size-n window; otherwise the first n entries.
      std::size_t src_t;
      if (ab.kind == BasisKind::Fourier && !ab.real_signal) {
        long long k = fft_signed_harmonic(t, n);
        src_t = k >= 0 ? static_cast<std::size_t>(k)
                       : static_cast<std::size_t>(k + static_cast<long long>(cur));
        long long kmax_src = static_cast<long long>(cur) / 2;
        long long kmin_src = kmax_src - static_cast<long long>(cur) + 1;
        if (k > kmax_src || k < kmin_src) continue;
      } else {
        src_t = t;
      }
      for (std::size_t i = 0; i < inner; ++i) {
        std::size_t src = axis == 0 ? src_t * inner + i : o * cur + src_t;
        std::size_t dst = axis == 0 ? t * inner + i : o * n + t;
        out.coeffs[dst] = s.coeffs[src];
      }
    }
  return out;
}

CoeffSeries pad(const CoeffSeries& s, std::size_t n, std::size_t axis) {
  validate(s);
  detail::require(axis < s.rank(), "pad: axis out of range");
  const std::size_t cur = s.shape[axis];
  detail::require(n >= cur, "pad: target shorter than input (use chop)");
  const AxisBasis& ab = s.axes[axis];
  CoeffSeries out = s;
  out.shape[axis] = n;
  out.coeffs.assign(out.size(), cplx{0.0, 0.0});
  const std::size_t inner = axis + 1 < s.rank() ? s.shape[axis + 1] : 1;
  const std::size_t outer = axis == 0 ? 1 : s.shape[0];
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t t = 0; t < cur; ++t) {
      std::size_t dst_t;
      if (ab.kind == BasisKind::Fourier && !ab.real_signal) {
        long long k = fft_signed_harmonic(t, cur);
        dst_t = k >= 0 ? static_cast<std::size_t>(k)
                       : static_cast<std::size_t>(k + static_cast<long long>(n));
      } else {
        dst_t = t;
      }
      for (std::size_t i = 0; i < inner; ++i) {
        std::size_t src = axis == 0 ? t * inner + i : o * cur + t;
        std::size_t dst = axis == 0 ? dst_t * inner + i : o * n + dst_t;
        out.coeffs[dst] = s.coeffs[src];
      }
    }
  return out;
}

std::vector<double> norm_weights(const AxisBasis& axis, std::size_t n) {
  std::vector<double> w(n);
  if (axis.kind == BasisKind::Chebyshev) {
    for (std::size_t i = 0; i < n; ++i) w[i] = i == 0 ? kPi : kPi / 2.0;
  } else if (axis.real_signal) {
    // |c_0|^2 counts once with measure 2; each stored k >= 1 stands for a
    // Hermitian pair, contributing 2 * 2 |c_k|^2.
    for (std::size_t i = 0; i < n; ++i) w[i] = i == 0 ? 2.0 : 4.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) w[i] = 2.0;
  }
  return w;
}

double norm_l2(const CoeffSeries& s) {
  validate(s);
  if (s.rank() == 1) {
    auto w = norm_weights(s.axes[0], s.shape[0]);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.shape[0]; ++i) acc += w[i] * std::norm(s.coeffs[i]);
    return std::sqrt(acc);
  }
  auto w0 = norm_weights(s.axes[0], s.shape[0]);
  auto w1 = norm_weights(s.axes[1], s.shape[1]);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.shape[0]; ++i)
    for (std::size_t j = 0; j < s.shape[1]; ++j)
      acc += w0[i] * w1[j] * std::norm(s.coeffs[i * s.shape[1] + j]);
  return std::sqrt(acc);
}

double max_abs(const CoeffSeries& s) {
  double m = 0.0;
  for (const cplx& c : s.coeffs) m = std::max(m, std::abs(c));
  return m;
}

bool is_real(const GridFunction& g, double tol) {
  for (const cplx& v : g.values)
    if (std::abs(v.imag()) > tol) return false;
  return true;
}

}  // namespace sno
