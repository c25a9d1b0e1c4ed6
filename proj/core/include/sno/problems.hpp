#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "sno/rng.hpp"
#include "sno/series.hpp"

namespace sno {

// Random band-limited family R(k_min, k_max, sigma): real part of a one-sided
// harmonic sum with iid complex normal draws, normalized so the draw vector
// has unit norm before the real part is taken.
struct RandomFamilyParams {
  std::size_t k_min = 0;
  std::size_t k_max = 10;
  double sigma = 2.0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

// One draw from an existing stream. If raw is non-null it receives the
// unnormalized draws d_{k_min}..d_{k_max} (used by statistical tests).
CoeffSeries random_family_draw(std::size_t k_min, std::size_t k_max, double sigma,
                               rng::Stream& stream, std::vector<cplx>* raw = nullptr);

// count draws, sample i using the stream derived from (seed, "sample", i).
std::vector<CoeffSeries> sample_random_family(const RandomFamilyParams& p);

// The three closed-form test operators on Fourier series: antiderivative
// (zero-mean input), f(x) f(x+1), and d/dx.
CoeffSeries target_integrate(const CoeffSeries& f);
CoeffSeries target_shift_product(const CoeffSeries& f);
CoeffSeries target_derivative(const CoeffSeries& f);

// Solution y(t) = exp(F(t)) of y' = y f with the zero-mean antiderivative F,
// re-expanded by sampling on a 4x-oversampled grid and chopped to harmonics
// <= target_band (0 keeps everything the oversampled grid resolves).
CoeffSeries parametric_ode_solution(const CoeffSeries& f, std::size_t target_band = 0);

// Benchmark problem generation. id is one of problem_ids() (or the aliases
// "derivative" and "identity"); zero/negative fields mean "problem default".
struct ProblemConfig {
  std::string id;
  std::size_t count = 200;
  std::uint64_t seed = 0;

  // random-family overrides (band problems)
  long k_min = -1;
  long k_max = -1;
  double sigma = 0.0;

  // solver overrides
  double nu = -1.0;          // Burgers viscosity
  double dt = 0.0;           // Burgers time step
  std::size_t grid = 0;      // Burgers spatial points
  std::size_t cheb_n = 0;    // elliptic collocation degree / breather x degree
  std::size_t time_n = 0;    // Chebyshev-in-t degree for D=2 targets
  std::size_t target_band = 0;
};

struct GeneratedSet {
  std::vector<CoeffSeries> inputs;
  std::vector<CoeffSeries> targets;
  nlohmann::ordered_json manifest;
};

// The 16 benchmark problems.
const std::vector<std::string>& problem_ids();
bool is_known_problem(const std::string& id);

// Fills a config with the problem's default band/solver settings.
ProblemConfig default_config(const std::string& id);

GeneratedSet generate_problem(const ProblemConfig& cfg);

// Dataset directory layout: manifest.json + inputs.specf + targets.specf.
void write_dataset(const std::filesystem::path& dir, const GeneratedSet& set);
GeneratedSet read_dataset(const std::filesystem::path& dir);

}  // namespace sno
