#include "sno/aliasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sno/errors.hpp"
#include "sno/transforms.hpp"

namespace sno {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::ReLU:
      return x > 0.0 ? x : 0.0;
    case Activation::Softplus:
      // log1p(exp(x)) overflows for large x; switch branches at 0.
      return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Identity:
      return x;
    case Activation::Square:
      return x * x;
  }
  detail::require(false, "unknown activation");
  return 0.0;
}

double activation_derivative(Activation a, double x) {
  switch (a) {
    case Activation::ReLU:
      return x > 0.0 ? 1.0 : 0.0;
    case Activation::Softplus:
      return x > 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::Identity:
      return 1.0;
    case Activation::Square:
      return 2.0 * x;
  }
  detail::require(false, "unknown activation");
  return 0.0;
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::ReLU:
      return "relu";
    case Activation::Softplus:
      return "softplus";
    case Activation::Tanh:
      return "tanh";
    case Activation::Identity:
      return "identity";
    case Activation::Square:
      return "square";
  }
  return "unknown";
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::ReLU;
  if (name == "softplus") return Activation::Softplus;
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  if (name == "square") return Activation::Square;
  detail::require(false, "unknown activation name: " + name);
  return Activation::Identity;
}

double relu_cheb_coeff(std::size_t i) {
  if (i == 0) return 1.0 / kPi;
  if (i == 1) return 0.5;
  if (i % 2 == 1) return 0.0;
  // cos(pi i / 2) = +1 for i = 0 mod 4, -1 for i = 2 mod 4.
  const double sign = (i % 4 == 0) ? 1.0 : -1.0;
  const double di = static_cast<double>(i);
  return (2.0 / kPi) * sign / (1.0 - di * di);
}

double theorem1_reference() {
  const double tail = (kPi * kPi - 8.0) / (4.0 * kPi * kPi);  // sum_{i>=2} p_i^2
  const double total = 2.0 * relu_cheb_coeff(0) * relu_cheb_coeff(0) +
                       relu_cheb_coeff(1) * relu_cheb_coeff(1) + tail;
  detail::numeric_check(std::abs(total - 0.5) < 1e-12, "ReLU Parseval bookkeeping broken");
  const double value = std::sqrt(kPi * kPi / 2.0 - 4.0) / kPi;
  detail::numeric_check(std::abs(value * value - tail / total) < 1e-12,
                        "ReLU tail ratio inconsistent with closed form");
  return value;
}

namespace {

// Oversampled real grid values of a 1D real-valued series.
std::vector<double> real_values_on_grid(const CoeffSeries& f, std::size_t grid_size) {
  const GridKind kind =
      f.axes[0].kind == BasisKind::Chebyshev ? GridKind::Chebyshev : GridKind::Uniform;
  GridFunction g = interpolate_to_grid(f, {grid_size}, {kind});
  std::vector<double> out(grid_size);
  double scale = 0.0;
  for (std::size_t j = 0; j < grid_size; ++j) scale = std::max(scale, std::abs(g.values[j]));
  const double tol = 1e-9 * std::max(scale, 1.0);
  for (std::size_t j = 0; j < grid_size; ++j) {
    detail::require(std::abs(g.values[j].imag()) <= tol,
                    "compose_with_activation requires a real-valued series");
    out[j] = g.values[j].real();
  }
  return out;
}

bool top_decile_energetic(const CoeffSeries& s) {
  const std::size_t n = s.shape[0];
  if (n < 10) return false;
  const std::vector<double> w = norm_weights(s.axes[0], n);
  double total = 0.0;
  double top = 0.0;
  const std::size_t cut = n - n / 10;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = w[i] * std::norm(s.coeffs[i]);
    total += e;
    if (i >= cut) top += e;
  }
  return total > 0.0 && top > 1e-8 * total;
}

}  // namespace

CompositionResult compose_with_activation(const CoeffSeries& f, Activation sigma,
                                          std::size_t oversample) {
  detail::require(f.rank() == 1, "compose_with_activation expects a 1D series");
  detail::require(oversample >= 1, "oversample must be positive");
  const bool packed_fourier = f.axes[0].kind == BasisKind::Fourier && f.axes[0].real_signal;
  detail::require(f.axes[0].kind == BasisKind::Chebyshev || packed_fourier,
                  "compose_with_activation expects packed Fourier or Chebyshev input");

  if (sigma == Activation::Identity) {
    return {f, false};
  }

  CompositionResult out;
  if (packed_fourier) {
    const std::size_t band = f.shape[0] > 0 ? f.shape[0] - 1 : 0;
    const std::size_t half = oversample * std::max<std::size_t>(band, 1);
    const std::size_t m = 2 * half + 1;  // odd: no Nyquist splitting on analysis
    std::vector<double> v = real_values_on_grid(f, m);
    for (double& x : v) x = apply_activation(sigma, x);
    GridFunction g = GridFunction::zeros({GridKind::Uniform}, {m});
    for (std::size_t j = 0; j < m; ++j) g.values[j] = v[j];
    out.series = fourier_analysis(g, /*real_signal=*/true);
  } else {
    const std::size_t deg = f.shape[0] > 0 ? f.shape[0] - 1 : 0;
    const std::size_t fine_deg = oversample * std::max<std::size_t>(deg, 1);
    const std::size_t m = fine_deg + 1;
    std::vector<double> v = real_values_on_grid(f, m);
    for (double& x : v) x = apply_activation(sigma, x);
    GridFunction g = GridFunction::zeros({GridKind::Chebyshev}, {m});
    for (std::size_t j = 0; j < m; ++j) g.values[j] = v[j];
    out.series = cheb_analysis(g);
  }
  out.undersampled = top_decile_energetic(out.series);
  return out;
}

namespace {

AliasingReport tail_report(const CoeffSeries& composed, std::size_t cutoff, bool undersampled) {
  const std::size_t n = composed.shape[0];
  const std::vector<double> w = norm_weights(composed.axes[0], n);
  double tail2 = 0.0;
  double total2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = w[i] * std::norm(composed.coeffs[i]);
    total2 += e;
    if (i > cutoff) tail2 += e;
  }
  AliasingReport r;
  r.tail_norm = std::sqrt(tail2);
  r.total_norm = std::sqrt(total2);
  r.value = total2 > 0.0 ? r.tail_norm / r.total_norm : 0.0;
  r.undersampled = undersampled;
  return r;
}

void check_band_limited(const CoeffSeries& f, std::size_t N) {
  const std::size_t n = f.shape[0];
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(f.coeffs[i]));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = N + 1; i < n; ++i) {
    detail::require(std::abs(f.coeffs[i]) <= tol,
                    "aliasing_error: input has energy beyond the stated band");
  }
}

}  // namespace

AliasingReport aliasing_error(const CoeffSeries& f, Activation sigma, std::size_t N,
                              std::size_t oversample) {
  return aliasing_error_refined(f, sigma, N, 1, oversample);
}

AliasingReport aliasing_error_refined(const CoeffSeries& f, Activation sigma, std::size_t N,
                                      std::size_t k, std::size_t oversample) {
  detail::require(f.rank() == 1, "aliasing_error expects a 1D series");
  detail::require(k >= 1, "refinement factor must be positive");
  check_band_limited(f, N);
  CompositionResult c = compose_with_activation(f, sigma, oversample);
  return tail_report(c.series, k * N, c.undersampled);
}

DiscrepancyReport operator_grid_discrepancy(const GridOperator& op,
                                            const std::vector<GridFunction>& fine_inputs,
                                            bool spectral_projection) {
  detail::require(!fine_inputs.empty(), "operator_grid_discrepancy needs at least one input");
  DiscrepancyReport rep;
  rep.per_input.reserve(fine_inputs.size());
  for (const GridFunction& u : fine_inputs) {
    detail::require(u.rank() == 1 && u.grids[0] == GridKind::Uniform,
                    "operator_grid_discrepancy expects 1D uniform-grid inputs");
    const std::size_t m = u.shape[0];
    detail::require(m % 2 == 0, "fine grid size must be even");

    GridFunction coarse_in = subsample(u, {2});
    GridFunction y_coarse = op(coarse_in);
    GridFunction y_fine = op(u);
    detail::require(y_fine.shape[0] == m && y_coarse.shape[0] == m / 2,
                    "operator must preserve grid size");

    GridFunction restricted = GridFunction::zeros({GridKind::Uniform}, {m / 2});
    if (spectral_projection) {
      CoeffSeries s = fourier_analysis(y_fine, /*real_signal=*/true);
      CoeffSeries trunc = chop(s, m / 4 + 1);
      restricted = fourier_synthesis(trunc, m / 2);
    } else {
      restricted = subsample(y_fine, {2});
    }

    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t j = 0; j < m / 2; ++j) {
      diff2 += std::norm(y_coarse.values[j] - restricted.values[j]);
      ref2 += std::norm(restricted.values[j]);
    }
    rep.per_input.push_back(ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2));
  }

  std::vector<double> sorted = rep.per_input;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  rep.max = sorted.back();
  rep.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double sum = 0.0;
  for (double d : sorted) sum += d;
  rep.mean = sum / static_cast<double>(n);
  return rep;
}

}  // namespace sno
