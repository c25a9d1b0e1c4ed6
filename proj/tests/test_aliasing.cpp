#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sno/aliasing.hpp"
#include "sno/rng.hpp"
#include "sno/series.hpp"
#include "sno/transforms.hpp"

using namespace sno;
using std::numbers::pi;

namespace {

const AxisBasis kCheb{BasisKind::Chebyshev, true};
const AxisBasis kFou{BasisKind::Fourier, true};

// Gauss-Chebyshev quadrature for Chebyshev coefficients of sigma(f).
double cheb_coeff_quad(Activation sigma, const CoeffSeries& f, std::size_t i, int M = 1 << 15) {
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    const double th = (j + 0.5) * pi / M;
    acc += apply_activation(sigma, evaluate(f, std::cos(th)).real()) *
           std::cos(static_cast<double>(i) * th);
  }
  return acc * (i == 0 ? 1.0 : 2.0) / M;
}

// Midpoint quadrature for packed Fourier coefficients of sigma(f).
cplx fourier_coeff_quad(Activation sigma, const CoeffSeries& f, std::size_t k, int M = 1 << 15) {
  cplx acc = 0.0;
  for (int j = 0; j < M; ++j) {
    const double x = -1.0 + 2.0 * (j + 0.5) / M;
    acc += apply_activation(sigma, evaluate(f, x).real()) *
           std::exp(cplx(0.0, -pi * static_cast<double>(k) * x));
  }
  return acc / static_cast<double>(M);
}

CoeffSeries cos_extreme(std::size_t N) {
  CoeffSeries f = CoeffSeries::zeros({kFou}, {N + 1});
  f.coeffs[N] = 0.5;  // cos(pi N x), packed half-pair
  return f;
}

}  // namespace

// ---- activations -----------------------------------------------------------

TEST_CASE("activation values and derivatives") {
  CHECK(apply_activation(Activation::ReLU, -1.5) == 0.0);
  CHECK(apply_activation(Activation::ReLU, 2.0) == 2.0);
  CHECK(apply_activation(Activation::Softplus, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(apply_activation(Activation::Tanh, 0.5) == doctest::Approx(std::tanh(0.5)));
  CHECK(apply_activation(Activation::Identity, -3.25) == -3.25);
  CHECK(apply_activation(Activation::Square, -3.0) == 9.0);

  // Central differences against the analytic derivative.
  for (auto a : {Activation::Softplus, Activation::Tanh, Activation::Identity, Activation::Square})
    for (double x : {-1.2, -0.1, 0.7}) {
      const double h = 1e-6;
      const double fd =
          (apply_activation(a, x + h) - apply_activation(a, x - h)) / (2 * h);
      CHECK(activation_derivative(a, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  CHECK(activation_derivative(Activation::ReLU, 1.0) == 1.0);
  CHECK(activation_derivative(Activation::ReLU, -1.0) == 0.0);
}

TEST_CASE("activation names round-trip, unknown rejected") {
  for (auto a : {Activation::ReLU, Activation::Softplus, Activation::Tanh, Activation::Identity,
                 Activation::Square})
    CHECK(activation_from_name(activation_name(a)) == a);
  CHECK_THROWS(activation_from_name("gelu"));
}

// ---- ReLU spectrum ---------------------------------------------------------

TEST_CASE("relu_cheb_coeff closed forms") {
  CHECK(relu_cheb_coeff(0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(relu_cheb_coeff(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(relu_cheb_coeff(2) == doctest::Approx(2.0 / (3.0 * pi)).epsilon(1e-15));
  CHECK(relu_cheb_coeff(3) == 0.0);
  CHECK(relu_cheb_coeff(5) == 0.0);
  CHECK(relu_cheb_coeff(4) == doctest::Approx(-2.0 / (15.0 * pi)).epsilon(1e-14));
}

TEST_CASE("relu_cheb_coeff matches Gauss-Chebyshev quadrature") {
  CoeffSeries x = CoeffSeries::d1(kCheb, {0.0, 1.0});
  for (std::size_t i : {0u, 1u, 2u, 4u, 6u, 9u})
    CHECK(relu_cheb_coeff(i) ==
          doctest::Approx(cheb_coeff_quad(Activation::ReLU, x, i)).epsilon(1e-9));
}

TEST_CASE("tail energy sum matches (pi^2 - 8) / (4 pi^2)") {
  double tail = 0.0;
  for (std::size_t i = 2; i <= 4000; ++i) tail += relu_cheb_coeff(i) * relu_cheb_coeff(i);
  CHECK(std::abs(tail - (pi * pi - 8.0) / (4.0 * pi * pi)) < 1e-10);
}

TEST_CASE("theorem1_reference value") {
  CHECK(theorem1_reference() ==
        doctest::Approx(std::sqrt(pi * pi / 2.0 - 4.0) / pi).epsilon(1e-15));
  CHECK(theorem1_reference() == doctest::Approx(0.30775845306124236).epsilon(1e-14));
}

// ---- composition -----------------------------------------------------------

TEST_CASE("identity composition reproduces the series") {
  rng::Stream st(5);
  CoeffSeries f = CoeffSeries::zeros({kFou}, {6});
  for (auto& c : f.coeffs) c = st.normal_complex();
  f.coeffs[0].imag(0.0);
  auto r = compose_with_activation(f, Activation::Identity);
  REQUIRE(r.series.coeffs.size() == f.coeffs.size());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    CHECK(std::abs(r.series.coeffs[i] - f.coeffs[i]) < 1e-15);
  CHECK_FALSE(r.undersampled);
}

TEST_CASE("square of the extreme cosine has the known two-line spectrum") {
  // cos^2(pi N x) = 1/2 + cos(2 pi N x) / 2 -> packed c_0 = 1/2, c_2N = 1/4.
  const std::size_t N = 3;
  auto r = compose_with_activation(cos_extreme(N), Activation::Square, 8);
  REQUIRE(r.series.coeffs.size() > 2 * N);
  CHECK(std::abs(r.series.coeffs[0] - cplx(0.5)) < 1e-13);
  CHECK(std::abs(r.series.coeffs[2 * N] - cplx(0.25)) < 1e-13);
  for (std::size_t k = 0; k < r.series.coeffs.size(); ++k)
    if (k != 0 && k != 2 * N) CHECK(std::abs(r.series.coeffs[k]) < 1e-13);
}

TEST_CASE("square of T_1 is (T_0 + T_2) / 2") {
  CoeffSeries t1 = CoeffSeries::d1(kCheb, {0.0, 1.0});
  auto r = compose_with_activation(t1, Activation::Square, 8);
  CHECK(std::abs(r.series.coeffs[0] - cplx(0.5)) < 1e-14);
  CHECK(std::abs(r.series.coeffs[2] - cplx(0.5)) < 1e-14);
  CHECK(std::abs(r.series.coeffs[1]) < 1e-14);
}

TEST_CASE("smooth composition matches quadrature coefficients, Fourier") {
  CoeffSeries f = CoeffSeries::d1(kFou, {0.3, 0.2});  // 0.3 + 0.4 cos(pi x)
  auto r = compose_with_activation(f, Activation::Tanh, 256);
  for (std::size_t k = 0; k <= 5; ++k) {
    const cplx want = fourier_coeff_quad(Activation::Tanh, f, k);
    CHECK(std::abs(r.series.coeffs[k] - want) < 1e-12);
  }
  CHECK_FALSE(r.undersampled);
}

TEST_CASE("smooth composition matches quadrature coefficients, Chebyshev") {
  CoeffSeries f = CoeffSeries::d1(kCheb, {0.2, 0.0, 0.5});
  auto r = compose_with_activation(f, Activation::Softplus, 256);
  for (std::size_t i = 0; i <= 5; ++i) {
    const double want = cheb_coeff_quad(Activation::Softplus, f, i);
    CHECK(std::abs(r.series.coeffs[i] - want) < 1e-12);
  }
  CHECK_FALSE(r.undersampled);
}

TEST_CASE("composition rejects full-spectrum input") {
  CoeffSeries f = CoeffSeries::zeros({AxisBasis{BasisKind::Fourier, false}}, {5});
  f.coeffs[1] = 1.0;
  CHECK_THROWS(compose_with_activation(f, Activation::Tanh));
}

// ---- aliasing error --------------------------------------------------------

TEST_CASE("square on the extreme harmonic: E_a = 1/sqrt(3)") {
  // Tail beyond N holds cos(2 pi N x)/2 with norm^2 1/4; total norm^2 3/4.
  for (std::size_t N : {2u, 5u}) {
    auto rep = aliasing_error(cos_extreme(N), Activation::Square, N, 64);
    CHECK(rep.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(rep.tail_norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.total_norm == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  }
}

TEST_CASE("aliasing error of the identity is zero") {
  auto rep = aliasing_error(cos_extreme(4), Activation::Identity, 4);
  CHECK(rep.value == 0.0);
}

TEST_CASE("aliasing_error enforces the band limit") {
  CoeffSeries f = CoeffSeries::zeros({kFou}, {6});
  f.coeffs[5] = 0.5;
  CHECK_THROWS(aliasing_error(f, Activation::ReLU, 3));
}

TEST_CASE("refined error: k = 1 reproduces the base, non-increasing in k") {
  rng::Stream st(17);
  for (int trial = 0; trial < 10; ++trial) {
    const bool cheb = trial % 2 == 0;
    CoeffSeries f = CoeffSeries::zeros({cheb ? kCheb : kFou}, {5});
    for (auto& c : f.coeffs) c = cplx(st.normal(), 0.0);
    auto base = aliasing_error(f, Activation::ReLU, 4, 64);
    double prev = base.value;
    for (std::size_t k = 1; k <= 5; ++k) {
      auto ref = aliasing_error_refined(f, Activation::ReLU, 4, k, 64);
      if (k == 1) CHECK(ref.value == doctest::Approx(base.value).epsilon(1e-14));
      CHECK(ref.value <= prev + 1e-14);
      prev = ref.value;
    }
  }
}

TEST_CASE("Parseval split: tail^2 + kept^2 = total^2") {
  CoeffSeries f = cos_extreme(4);
  auto rep = aliasing_error(f, Activation::ReLU, 4, 128);
  CHECK(rep.tail_norm <= rep.total_norm);
  CHECK(rep.value == doctest::Approx(rep.tail_norm / rep.total_norm).epsilon(1e-14));
  auto comp = compose_with_activation(f, Activation::ReLU, 128);
  CHECK(norm_l2(comp.series) == doctest::Approx(rep.total_norm).epsilon(1e-12));
}

// ---- grid discrepancy ------------------------------------------------------

TEST_CASE("pointwise operators have zero grid discrepancy") {
  rng::Stream st(31);
  std::vector<GridFunction> fine;
  for (int i = 0; i < 3; ++i) {
    GridFunction g = GridFunction::zeros({GridKind::Uniform}, {16});
    for (auto& v : g.values) v = st.normal();
    fine.push_back(g);
  }
  GridOperator square = [](const GridFunction& u) {
    GridFunction out = u;
    for (auto& v : out.values) v = v * v;
    return out;
  };
  auto rep = operator_grid_discrepancy(square, fine);
  REQUIRE(rep.per_input.size() == 3);
  for (double d : rep.per_input) CHECK(d < 1e-14);
  CHECK(rep.max < 1e-14);
}

TEST_CASE("grid-coupled operators show positive discrepancy, stats aggregate") {
  // First-difference quotient depends on the spacing, so coarse and restricted
  // outputs disagree.
  GridOperator fwd_diff = [](const GridFunction& u) {
    const std::size_t m = u.shape[0];
    GridFunction out = u;
    const double h = 2.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j)
      out.values[j] = (u.values[(j + 1) % m] - u.values[j]) / h;
    return out;
  };
  rng::Stream st(37);
  std::vector<GridFunction> fine;
  for (int i = 0; i < 5; ++i) {
    CoeffSeries s = CoeffSeries::zeros({kFou}, {4});
    for (auto& c : s.coeffs) c = st.normal_complex();
    s.coeffs[0] = cplx(st.normal(), 0.0);
    fine.push_back(fourier_synthesis(s, 32));
  }
  auto rep = operator_grid_discrepancy(fwd_diff, fine);
  REQUIRE(rep.per_input.size() == 5);
  double mx = 0.0, sum = 0.0;
  for (double d : rep.per_input) {
    CHECK(d > 1e-4);
    mx = std::max(mx, d);
    sum += d;
  }
  CHECK(rep.max == doctest::Approx(mx));
  CHECK(rep.mean == doctest::Approx(sum / 5.0));
  std::vector<double> sorted = rep.per_input;
  std::sort(sorted.begin(), sorted.end());
  CHECK(rep.median == doctest::Approx(sorted[2]));
}

TEST_CASE("spectral projection restriction also detects aliasing") {
  GridOperator square = [](const GridFunction& u) {
    GridFunction out = u;
    for (auto& v : out.values) v = v * v;
    return out;
  };
  // Band-3 input on 16 points; squaring doubles the band past the coarse
  // Nyquist, so spectral restriction of the fine output differs from the
  // coarse evaluation.
  CoeffSeries s = CoeffSeries::zeros({kFou}, {4});
  s.coeffs[3] = 0.5;
  std::vector<GridFunction> fine = {fourier_synthesis(s, 16)};
  auto with_proj = operator_grid_discrepancy(square, fine, true);
  CHECK(with_proj.per_input[0] > 1e-3);
}
