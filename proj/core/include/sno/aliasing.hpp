#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sno/series.hpp"

namespace sno {

enum class Activation { ReLU, Softplus, Tanh, Identity, Square };

double apply_activation(Activation a, double x);
double activation_derivative(Activation a, double x);
std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Chebyshev coefficients of ReLU on [-1,1]: p_0 = 1/pi, p_1 = 1/2,
// p_i = (2/pi) cos(pi i / 2) / (1 - i^2) for i >= 2 (zero for odd i >= 3).
double relu_cheb_coeff(std::size_t i);

// (1/pi) sqrt(pi^2/2 - 4): the aliasing error of ReLU acting on the extreme
// harmonic, independent of the band N. Internally cross-checks the Parseval
// bookkeeping 2 p_0^2 + p_1^2 + sum_{i>=2} p_i^2 = 1/2 against closed forms.
double theorem1_reference();

struct CompositionResult {
  CoeffSeries series;
  // Set when the top decile of coefficient energy exceeds 1e-8 of the total,
  // i.e. the oversampled grid did not resolve sigma(f).
  bool undersampled = false;
};

// Pseudospectral composition sigma(f): synthesize f on a grid oversampling its
// band by `oversample`, apply sigma pointwise, transform back. f must be a
// real-valued 1D series (packed Fourier or Chebyshev). Identity sigma takes a
// chop-free path and reproduces f exactly.
CompositionResult compose_with_activation(const CoeffSeries& f, Activation sigma,
                                          std::size_t oversample = 32);

struct AliasingReport {
  double value = 0.0;       // E_a
  double tail_norm = 0.0;   // basis-native norm of the discarded tail
  double total_norm = 0.0;  // basis-native norm of sigma(f)
  bool undersampled = false;
};

// E_a(f, sigma) = || tail_{>N} sigma(f) || / || sigma(f) || for f band-limited
// to N (coefficients beyond N must vanish to 1e-12 relative).
AliasingReport aliasing_error(const CoeffSeries& f, Activation sigma, std::size_t N,
                              std::size_t oversample = 32);

// Refined variant: the tail starts above k*N instead of N. k = 1 reproduces
// aliasing_error exactly; the value is non-increasing in k.
AliasingReport aliasing_error_refined(const CoeffSeries& f, Activation sigma, std::size_t N,
                                      std::size_t k, std::size_t oversample = 32);

using GridOperator = std::function<GridFunction(const GridFunction&)>;

struct DiscrepancyReport {
  std::vector<double> per_input;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

// Relative discrepancy between evaluating an operator on the coarse grid and
// restricting its fine-grid output: || N(u_2h) - [N(u_h)]_2h || / || [N(u_h)]_2h ||
// over 1D uniform inputs of even size. Restriction is plain subsampling;
// spectral_projection = true truncates the output band instead.
DiscrepancyReport operator_grid_discrepancy(const GridOperator& op,
                                            const std::vector<GridFunction>& fine_inputs,
                                            bool spectral_projection = false);

}  // namespace sno
