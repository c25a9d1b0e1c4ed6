#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sno/training.hpp"

namespace sno {

// One experiment run: which protocol, over which (model, problem) grid, with
// which training budget and band/grid parameters. Parsed from key=value
// config files; empty lists fall back to per-kind defaults.
struct ExperimentConfig {
  std::string kind = "benchmark"; // benchmark | superres | lowfreq | aliasing | init
  std::vector<std::string> models;   // architecture names, plus "oracle"
  std::vector<std::string> problems; // problem ids
  TrainConfig train;

  std::size_t count = 200;      // training samples
  std::size_t test_count = 200; // held-out samples
  long k_min = -1, k_max = -1;  // dataset band override
  std::vector<long> dk;         // band shifts (superres: up, lowfreq: down)
  std::vector<std::size_t> grids; // aliasing-study training grid sizes
  std::size_t train_grid = 33;  // superres training grid (2K+1 rule)
  std::size_t eval_grid = 99;
  std::size_t eval_grid1 = 0;   // dim-2 second axis; 0 picks a default
  std::vector<std::uint64_t> seeds; // init-sensitivity seed list
  std::uint64_t seed = 0;
  std::string out = "results.csv";
  bool deterministic_output = true; // zero the seconds column for diffability

  // model-size overrides (0 = architecture default)
  std::size_t size0 = 0, size1 = 0, features = 0, n2_layers = 0;
  std::size_t fno_width = 0, fno_modes = 0, fno_grid = 0;
  std::string activation; // softplus | relu | tanh | identity
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Derives a model shape for `arch` from a dataset sample: coefficient sizes
// track the data band (clamped to desk scale), grid models get their default
// grid, overrides in cfg win. `set` must hold at least one sample.
struct GeneratedSet;
ModelSpec model_spec_for(const ExperimentConfig& cfg, const std::string& arch,
                         const GeneratedSet& set);

struct ResultRecord {
  std::string experiment;
  std::string model;
  std::string problem;
  std::string param;  // "-" when the row has no parameter point
  std::string metric;
  double value = 0.0;
  double seconds = 0.0;
};

// CSV with the fixed header experiment,model,problem,param,metric,value,seconds.
std::string results_csv(const std::vector<ResultRecord>& rows, bool deterministic_output);
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRecord>& rows,
                       bool deterministic_output);

// Trains every configured model on every configured problem and reports
// relative L2 test errors, with exact-spectral-rule "oracle" baseline rows
// where a closed-form rule exists. Training failures become NaN rows.
std::vector<ResultRecord> run_benchmark(const ExperimentConfig& cfg);

// Trains on the base band, then evaluates on up-shifted bands [k+dk] on the
// fine grid. Rejects eval grids below the 2 max|k|+1 sampling rule.
std::vector<ResultRecord> run_superres(const ExperimentConfig& cfg);

// Trains the integration operator on a high band and evaluates on down-shifted
// bands.
std::vector<ResultRecord> run_lowfreq(const ExperimentConfig& cfg);

// Left panel: per training grid size, trains FNO and measures its coarse/fine
// operator discrepancy. Right panel: the coarsest-grid FNO evaluated with
// inputs sampled on finer grids. Also emits series-interface (SNO) and
// fixed-sensor (DeepONet) discrepancy rows, which stay at roundoff.
std::vector<ResultRecord> run_aliasing_study(const ExperimentConfig& cfg);

// Re-trains per seed in the seed list; reports per-seed errors, population
// mean/std, and a right-skew flag (mean - std < 0).
std::vector<ResultRecord> run_init_sensitivity(const ExperimentConfig& cfg);

// Dispatch on cfg.kind.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

}  // namespace sno
