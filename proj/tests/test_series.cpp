#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sno/rng.hpp"
#include "sno/series.hpp"

using namespace sno;
using std::numbers::pi;

namespace {

// ---- oracles (independent of the library implementations) -----------------

// T_n(x) for |x| <= 1 via the trigonometric definition.
double cheb_T(long long n, double x) {
  return std::cos(static_cast<double>(n) * std::acos(std::clamp(x, -1.0, 1.0)));
}

// Direct summation of the expansion, term by term. No Clenshaw, no FFT.
cplx naive_eval(const CoeffSeries& s, double x) {
  REQUIRE(s.rank() == 1);
  cplx acc = 0.0;
  const AxisBasis& ax = s.axes[0];
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (ax.kind == BasisKind::Chebyshev) {
      acc += s.coeffs[i] * cheb_T(static_cast<long long>(i), x);
    } else if (ax.real_signal) {
      const double th = pi * static_cast<double>(i) * x;
      const cplx e(std::cos(th), std::sin(th));
      acc += s.coeffs[i] * e;
      if (i > 0) acc += std::conj(s.coeffs[i]) * std::conj(e);
    } else {
      const long long k = fft_signed_harmonic(i, s.coeffs.size());
      const double th = pi * static_cast<double>(k) * x;
      acc += s.coeffs[i] * cplx(std::cos(th), std::sin(th));
    }
  }
  return acc;
}

// 4th-order central difference of evaluate.
cplx fd_derivative(const CoeffSeries& s, double x, double h = 1e-3) {
  return (-evaluate(s, x + 2 * h) + 8.0 * evaluate(s, x + h) - 8.0 * evaluate(s, x - h) +
          evaluate(s, x - 2 * h)) /
         (12.0 * h);
}

// Gauss-Chebyshev quadrature: int f(x) / sqrt(1-x^2) dx, exact for polynomial
// f of degree < 2M.
template <class F>
double gc_quad(F f, int M = 2048) {
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    const double th = (j + 0.5) * pi / M;
    acc += f(std::cos(th));
  }
  return acc * pi / M;
}

// Midpoint rule on [-1,1]; exact for trig polynomials of band < M/2.
template <class F>
double midpoint_quad(F f, int M = 4096) {
  double acc = 0.0;
  for (int j = 0; j < M; ++j) acc += f(-1.0 + 2.0 * (j + 0.5) / M);
  return acc * 2.0 / M;
}

CoeffSeries random_series(AxisBasis ax, std::size_t n, std::uint64_t seed) {
  rng::Stream st(seed);
  CoeffSeries s = CoeffSeries::zeros({ax}, {n});
  for (auto& c : s.coeffs) c = st.normal_complex();
  if (ax.kind == BasisKind::Fourier && ax.real_signal) s.coeffs[0].imag(0.0);
  return s;
}

const AxisBasis kCheb{BasisKind::Chebyshev, true};
const AxisBasis kFou{BasisKind::Fourier, true};
const AxisBasis kFull{BasisKind::Fourier, false};

}  // namespace

// ---- grids and sizes -------------------------------------------------------

TEST_CASE("cheb_points are extrema, descending") {
  auto x = cheb_points(4);
  REQUIRE(x.size() == 5);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[2] == doctest::Approx(0.0));
  CHECK(x[4] == doctest::Approx(-1.0));
  for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] < x[i - 1]);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(x[k] == doctest::Approx(std::cos(k * pi / 4)).epsilon(1e-15));
}

TEST_CASE("uniform_points exclude the right endpoint") {
  auto x = uniform_points(4);
  REQUIRE(x.size() == 4);
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(x[1] == doctest::Approx(-0.5));
  CHECK(x[3] == doctest::Approx(0.5));
}

TEST_CASE("natural_grid_size round-trips coeff_count_for_grid") {
  CHECK(natural_grid_size(kCheb, 9) == 9);
  CHECK(natural_grid_size(kFou, 9) == 17);  // packed K+1 -> 2K+1
  CHECK(natural_grid_size(kFull, 9) == 9);
  for (std::size_t n : {2u, 5u, 16u, 33u})
    CHECK(coeff_count_for_grid(kCheb, natural_grid_size(kCheb, n)) == n);
  for (std::size_t n : {1u, 2u, 5u, 16u, 33u}) {
    CHECK(coeff_count_for_grid(kFou, natural_grid_size(kFou, n)) == n);
    CHECK(coeff_count_for_grid(kFull, natural_grid_size(kFull, n)) == n);
  }
  // A constant Chebyshev series still synthesizes to the 2-point minimum grid.
  CHECK(natural_grid_size(kCheb, 1) == 2);
}

TEST_CASE("fft_signed_harmonic splits at m/2") {
  CHECK(fft_signed_harmonic(0, 8) == 0);
  CHECK(fft_signed_harmonic(4, 8) == 4);
  CHECK(fft_signed_harmonic(5, 8) == -3);
  CHECK(fft_signed_harmonic(7, 8) == -1);
  CHECK(fft_signed_harmonic(2, 5) == 2);
  CHECK(fft_signed_harmonic(3, 5) == -2);
}

// ---- evaluation ------------------------------------------------------------

TEST_CASE("evaluate matches direct summation") {
  rng::Stream xs(101);
  for (auto ax : {kCheb, kFou, kFull}) {
    CoeffSeries s = random_series(ax, 13, 55);
    for (int t = 0; t < 25; ++t) {
      const double x = xs.uniform(-1.0, 1.0);
      const cplx want = naive_eval(s, x);
      const cplx got = evaluate(s, x);
      CHECK(std::abs(got - want) < 1e-12 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("T_2(0.5) = -0.5") {
  CoeffSeries s = CoeffSeries::d1(kCheb, {0.0, 0.0, 1.0});
  CHECK(evaluate(s, 0.5).real() == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(evaluate(s, 0.5).imag() == doctest::Approx(0.0));
}

TEST_CASE("packed Fourier half-pair convention: c_1 = 1/2 is cos(pi x)") {
  CoeffSeries s = CoeffSeries::d1(kFou, {0.0, 0.5});
  for (double x : {-0.9, -0.3, 0.0, 0.4, 1.0})
    CHECK(evaluate(s, x).real() == doctest::Approx(std::cos(pi * x)).epsilon(1e-14));
}

TEST_CASE("2D evaluate factors on separable coefficients") {
  // Packed axes conjugate the whole coefficient for the implicit pair, so the
  // outer factor must be real for the product to factor; kFull has no pairing.
  CoeffSeries a = random_series(kCheb, 6, 7);
  for (auto& c : a.coeffs) c.imag(0.0);
  CoeffSeries b = random_series(kFou, 5, 8);
  CoeffSeries s = CoeffSeries::zeros({kCheb, kFou}, {6, 5});
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 5; ++j) s.coeffs[i * 5 + j] = a.coeffs[i] * b.coeffs[j];
  CoeffSeries c = random_series(kFull, 5, 9);
  CoeffSeries d = random_series(kCheb, 4, 10);
  CoeffSeries s2 = CoeffSeries::zeros({kFull, kCheb}, {5, 4});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) s2.coeffs[i * 4 + j] = c.coeffs[i] * d.coeffs[j];
  rng::Stream xs(9);
  for (int t = 0; t < 20; ++t) {
    const double x = xs.uniform(-1.0, 1.0), y = xs.uniform(-1.0, 1.0);
    const cplx want = naive_eval(a, x) * naive_eval(b, y);
    CHECK(std::abs(evaluate(s, x, y) - want) < 1e-11 * (1.0 + std::abs(want)));
    const cplx want2 = naive_eval(c, x) * naive_eval(d, y);
    CHECK(std::abs(evaluate(s2, x, y) - want2) < 1e-11 * (1.0 + std::abs(want2)));
  }
}

// ---- calculus --------------------------------------------------------------

TEST_CASE("differentiate: T_3' = 3 T_0 + 6 T_2") {
  CoeffSeries s = CoeffSeries::d1(kCheb, {0.0, 0.0, 0.0, 1.0});
  CoeffSeries d = differentiate(s);
  REQUIRE(d.coeffs.size() == 3);
  CHECK(std::abs(d.coeffs[0] - 3.0) < 1e-14);
  CHECK(std::abs(d.coeffs[1]) < 1e-14);
  CHECK(std::abs(d.coeffs[2] - 6.0) < 1e-14);
}

TEST_CASE("differentiate matches finite differences") {
  rng::Stream xs(3);
  for (auto ax : {kCheb, kFou, kFull}) {
    CoeffSeries s = random_series(ax, 9, 21);
    CoeffSeries d = differentiate(s);
    const double scale = 1.0 + max_abs(d) * 9.0;
    for (int t = 0; t < 10; ++t) {
      const double x = xs.uniform(-0.8, 0.8);
      CHECK(std::abs(evaluate(d, x) - fd_derivative(s, x)) < 1e-8 * scale);
    }
  }
}

TEST_CASE("differentiate length-1 Chebyshev gives the zero series") {
  CoeffSeries d = differentiate(CoeffSeries::d1(kCheb, {2.5}));
  REQUIRE(d.coeffs.size() == 1);
  CHECK(std::abs(d.coeffs[0]) == 0.0);
}

TEST_CASE("Fourier differentiate multiplies by i pi k, signed") {
  CoeffSeries s = random_series(kFull, 7, 31);
  CoeffSeries d = differentiate(s);
  REQUIRE(d.coeffs.size() == 7);
  for (std::size_t t = 0; t < 7; ++t) {
    const cplx want = s.coeffs[t] * cplx(0, pi * fft_signed_harmonic(t, 7));
    CHECK(std::abs(d.coeffs[t] - want) < 1e-14 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("integrate T_1 gives (T_2 - T_0) / 4, vanishing at -1") {
  CoeffSeries s = CoeffSeries::d1(kCheb, {0.0, 1.0});
  CoeffSeries F = integrate(s);
  REQUIRE(F.coeffs.size() == 3);
  CHECK(std::abs(F.coeffs[0] - cplx(-0.25)) < 1e-14);
  CHECK(std::abs(F.coeffs[1]) < 1e-14);
  CHECK(std::abs(F.coeffs[2] - cplx(0.25)) < 1e-14);
  CHECK(std::abs(evaluate(F, -1.0)) < 1e-14);
}

TEST_CASE("integrate is a right inverse of differentiate") {
  for (auto ax : {kCheb, kFou}) {
    CoeffSeries s = random_series(ax, 8, 77);
    if (ax.kind == BasisKind::Fourier) s.coeffs[0] = 0.0;  // integrable
    CoeffSeries back = differentiate(integrate(s));
    REQUIRE(back.coeffs.size() >= s.coeffs.size());
    for (std::size_t i = 0; i < back.coeffs.size(); ++i) {
      const cplx want = i < s.coeffs.size() ? s.coeffs[i] : cplx(0.0);
      CHECK(std::abs(back.coeffs[i] - want) < 1e-12);
    }
    // Integration constant: Chebyshev pins F(-1) = 0, Fourier pins mean 0.
    if (ax.kind == BasisKind::Chebyshev)
      CHECK(std::abs(evaluate(integrate(s), -1.0)) < 1e-12);
    else
      CHECK(std::abs(integrate(s).coeffs[0]) == 0.0);
  }
}

TEST_CASE("integrate rejects a Fourier series with nonzero mean") {
  CoeffSeries s = CoeffSeries::d1(kFou, {1.0, 0.5});
  CHECK_THROWS(integrate(s));
}

TEST_CASE("shift by 1 negates cos(pi x)") {
  CoeffSeries s = CoeffSeries::d1(kFou, {0.0, 0.5});
  CoeffSeries t = shift(s, 1.0);
  for (double x : {-0.7, 0.0, 0.3})
    CHECK(evaluate(t, x).real() == doctest::Approx(-std::cos(pi * x)).epsilon(1e-13));
}

TEST_CASE("shift agrees with argument translation") {
  for (auto ax : {kFou, kFull}) {
    CoeffSeries s = random_series(ax, 6, 13);
    const double delta = 0.37;
    CoeffSeries t = shift(s, delta);
    rng::Stream xs(5);
    for (int k = 0; k < 10; ++k) {
      const double x = xs.uniform(-1.0, 1.0);
      const cplx want = naive_eval(s, x + delta);
      CHECK(std::abs(evaluate(t, x) - want) < 1e-12 * (1.0 + std::abs(want)));
    }
  }
  CHECK_THROWS(shift(CoeffSeries::d1(kCheb, {1.0, 1.0}), 0.5));
}

// ---- products --------------------------------------------------------------

TEST_CASE("T_1 * T_1 = (T_0 + T_2) / 2") {
  CoeffSeries t1 = CoeffSeries::d1(kCheb, {0.0, 1.0});
  CoeffSeries p = multiply(t1, t1);
  REQUIRE(p.coeffs.size() == 3);
  CHECK(std::abs(p.coeffs[0] - cplx(0.5)) < 1e-14);
  CHECK(std::abs(p.coeffs[1]) < 1e-14);
  CHECK(std::abs(p.coeffs[2] - cplx(0.5)) < 1e-14);
}

TEST_CASE("harmonic product e_2 * e_3 = e_5") {
  // FFT order [0,1,2,-2,-1]: index 2 of m=5 is e_2; index 3 of m=7 is e_3.
  CoeffSeries a = CoeffSeries::zeros({kFull}, {5});
  a.coeffs[2] = 1.0;
  CoeffSeries b = CoeffSeries::zeros({kFull}, {7});
  b.coeffs[3] = 1.0;
  CoeffSeries p = multiply(a, b);
  rng::Stream xs(17);
  for (int t = 0; t < 8; ++t) {
    const double x = xs.uniform(-1.0, 1.0);
    const cplx want(std::cos(5 * pi * x), std::sin(5 * pi * x));
    CHECK(std::abs(evaluate(p, x) - want) < 1e-13);
  }
}

TEST_CASE("multiply agrees with pointwise products") {
  rng::Stream xs(23);
  for (auto ax : {kCheb, kFou, kFull}) {
    CoeffSeries a = random_series(ax, 7, 41);
    CoeffSeries b = random_series(ax, 5, 42);
    CoeffSeries p = multiply(a, b);
    CHECK(p.coeffs.size() == 11);
    for (int t = 0; t < 15; ++t) {
      const double x = xs.uniform(-1.0, 1.0);
      const cplx want = naive_eval(a, x) * naive_eval(b, x);
      CHECK(std::abs(evaluate(p, x) - want) < 1e-11 * (1.0 + std::abs(want)));
    }
  }
}

// ---- chop / pad ------------------------------------------------------------

TEST_CASE("pad preserves the function") {
  rng::Stream xs(29);
  for (auto ax : {kCheb, kFou, kFull}) {
    CoeffSeries s = random_series(ax, 6, 61);
    CoeffSeries p = pad(s, 11);
    CHECK(p.coeffs.size() == 11);
    for (int t = 0; t < 10; ++t) {
      const double x = xs.uniform(-1.0, 1.0);
      CHECK(std::abs(evaluate(p, x) - naive_eval(s, x)) < 1e-12);
    }
  }
}

TEST_CASE("chop then pad keeps the low harmonics, zeroes the rest") {
  CoeffSeries s = random_series(kFull, 9, 71);  // harmonics 0..4, -4..-1
  CoeffSeries c = chop(s, 5);                   // keep 0,1,2,-2,-1
  REQUIRE(c.coeffs.size() == 5);
  for (std::size_t t = 0; t < 5; ++t) {
    const long long k = fft_signed_harmonic(t, 5);
    const std::size_t src = k >= 0 ? static_cast<std::size_t>(k)
                                   : 9 - static_cast<std::size_t>(-k);
    CHECK(std::abs(c.coeffs[t] - s.coeffs[src]) < 1e-15);
  }
  CoeffSeries cc = chop(random_series(kCheb, 9, 72), 4);
  CHECK(cc.coeffs.size() == 4);
}

TEST_CASE("chop along axis 1 of a 2D series") {
  CoeffSeries s = CoeffSeries::zeros({kCheb, kCheb}, {3, 4});
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] = static_cast<double>(i);
  CoeffSeries c = chop(s, 2, 1);
  REQUIRE(c.shape == std::vector<std::size_t>{3, 2});
  CHECK(c.coeffs[0] == cplx(0.0));
  CHECK(c.coeffs[1] == cplx(1.0));
  CHECK(c.coeffs[2] == cplx(4.0));
  CHECK(c.coeffs[5] == cplx(9.0));
}

// ---- norms -----------------------------------------------------------------

TEST_CASE("pinned norms: |T_0| = sqrt(pi), |T_n| = sqrt(pi/2), |cos(pi n x)| = 1") {
  CHECK(norm_l2(CoeffSeries::d1(kCheb, {1.0})) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(norm_l2(CoeffSeries::d1(kCheb, {0.0, 0.0, 1.0})) ==
        doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-14));
  CHECK(norm_l2(CoeffSeries::d1(kFou, {0.0, 0.0, 0.0, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_weights match the pinned basis norms") {
  auto wc = norm_weights(kCheb, 4);
  CHECK(wc[0] == doctest::Approx(pi));
  CHECK(wc[1] == doctest::Approx(pi / 2));
  CHECK(wc[3] == doctest::Approx(pi / 2));
  auto wf = norm_weights(kFou, 4);
  CHECK(wf[0] == doctest::Approx(2.0));
  CHECK(wf[1] == doctest::Approx(4.0));
  CHECK(wf[3] == doctest::Approx(4.0));
  auto wl = norm_weights(kFull, 5);
  for (double w : wl) CHECK(w == doctest::Approx(2.0));
}

TEST_CASE("norm_l2 agrees with quadrature") {
  CoeffSeries c = random_series(kCheb, 9, 91);
  const double want_c = std::sqrt(gc_quad([&](double x) { return std::norm(naive_eval(c, x)); }));
  CHECK(norm_l2(c) == doctest::Approx(want_c).epsilon(1e-12));

  CoeffSeries f = random_series(kFou, 7, 92);
  const double want_f =
      std::sqrt(midpoint_quad([&](double x) { return std::norm(naive_eval(f, x)); }));
  CHECK(norm_l2(f) == doctest::Approx(want_f).epsilon(1e-12));
}

TEST_CASE("2D norm is the product measure") {
  CoeffSeries a = random_series(kCheb, 5, 15);
  CoeffSeries b = random_series(kFou, 4, 16);
  CoeffSeries s = CoeffSeries::zeros({kCheb, kFou}, {5, 4});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) s.coeffs[i * 4 + j] = a.coeffs[i] * b.coeffs[j];
  CHECK(norm_l2(s) == doctest::Approx(norm_l2(a) * norm_l2(b)).epsilon(1e-12));
}

// ---- misc ------------------------------------------------------------------

TEST_CASE("is_real and max_abs") {
  GridFunction g = GridFunction::d1(GridKind::Uniform, {cplx(1, 1e-12), cplx(-2, 0)});
  CHECK(is_real(g));
  CHECK_FALSE(is_real(g, 1e-13));
  CoeffSeries s = CoeffSeries::d1(kCheb, {cplx(0, 3), 1.0});
  CHECK(max_abs(s) == doctest::Approx(3.0));
}

TEST_CASE("validate rejects inconsistent shapes") {
  CoeffSeries s;
  s.axes = {kCheb};
  s.shape = {3};
  s.coeffs = {1.0, 2.0};  // size mismatch
  CHECK_THROWS(validate(s));
  GridFunction g;
  g.grids = {GridKind::Chebyshev, GridKind::Uniform};
  g.shape = {2};
  g.values = {1.0, 2.0};
  CHECK_THROWS(validate(g));
}
