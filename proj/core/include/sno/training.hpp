#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sno/models.hpp"

namespace sno {

struct TrainConfig {
  double lr = 1e-3;
  double decay = 0.5;
  std::size_t decay_interval = 2000;  // steps between halvings of the rate
  std::size_t epochs = 2000;
  std::size_t batch = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  std::size_t log_interval = 100;
  std::size_t eval_grid = 99;   // uniform evaluation grid, axis 0
  std::size_t eval_grid1 = 0;   // axis 1 (dim 2); 0 = same as eval_grid
};

// Model-ready batch: inputs/targets as produced by pack_inputs/pack_targets.
struct Dataset {
  ad::Tensor inputs;
  ad::Tensor targets;
};

// Adam moments, one pair per parameter tensor. Moment tensors reuse complex
// storage: real parts carry the real-component moments, imaginary parts the
// imaginary-component ones (every update is componentwise).
struct AdamState {
  std::vector<ad::Tensor> m;
  std::vector<ad::Tensor> v;
  std::size_t step = 0;
};

AdamState make_adam_state(const Params& params);

// One Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8) at step size
// lr * decay^floor(step / decay_interval); real/imag components carry
// independent moments. real_only tensors ignore the imaginary gradient.
void adam_step(Params& params, const std::vector<ad::Tensor>& grads, AdamState& state,
               const TrainConfig& cfg);

struct TrainHistory {
  std::vector<std::size_t> epoch;
  std::vector<double> train_loss;
  std::vector<double> test_loss;  // empty slots are -1 when no test set given
};

// Forward pass without gradients; returns the raw output tensor.
ad::Tensor forward_values(const ModelSpec& spec, const Params& params, const ad::Tensor& inputs);

// Mean per-sample relative L2 loss of the model on a packed dataset.
double batch_loss(const ModelSpec& spec, const Params& params, const Dataset& data);

// Adam descent on the mean relative L2 loss in the model's native
// representation. Deterministic given cfg.seed; throws on NaN loss with the
// epoch and per-tensor norms in the message.
TrainHistory train_loop(const ModelSpec& spec, Params& params, const Dataset& train,
                        const Dataset* test, const TrainConfig& cfg);

// Relative L2 test error recomputed on the uniform grid: model output and
// target are both sampled on eval_grid (x eval_grid1) uniform points.
double evaluate_on_uniform(const ModelSpec& spec, const Params& params,
                           const std::vector<CoeffSeries>& inputs,
                           const std::vector<CoeffSeries>& targets, std::size_t eval_grid,
                           std::size_t eval_grid1 = 0);

// Max relative difference between reverse-mode gradients and fourth-order
// central differences over every parameter component (real and imaginary
// separately). Components below 2% of their tensor's gradient scale, or below
// the absolute FD noise floor eps * loss / step, are compared against those
// floors instead of themselves.
double gradient_check(const ModelSpec& spec, const Params& params, const Dataset& data,
                      double step = 1e-5);

// Checkpoint: one-line JSON manifest (spec, train config, epoch, parameter
// table) + '\n' + float64 little-endian (re, im) blob in declared order.
void save_model(const std::string& path, const ModelSpec& spec, const Params& params,
                const TrainConfig& cfg, std::size_t epoch);

struct LoadedModel {
  ModelSpec spec;
  Params params;
  TrainConfig config;
  std::size_t epoch = 0;
};

LoadedModel load_model(const std::string& path);

}  // namespace sno
