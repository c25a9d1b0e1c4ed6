#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sno/autodiff.hpp"
#include "sno/series.hpp"

namespace sno {

// Suffixes: _Ch / _F pick the basis of the spatial axis (Chebyshev vs packed
// Fourier). SNO maps coefficients to coefficients through complex linear
// layers; xSNO applies the same layer algebra to grid values; xcSNO alternates
// grid blocks and a residual coefficient block through in-network transforms.
enum class Architecture { SNO_Ch, SNO_F, xSNO_Ch, xSNO_F, xcSNO_Ch, xcSNO_F, FNO, DeepONet };

std::string architecture_name(Architecture a);
Architecture architecture_from_name(const std::string& name);

struct ModelSpec {
  Architecture arch = Architecture::SNO_Ch;
  std::size_t dim = 1;  // D: output axes (2 adds a Chebyshev axis, e.g. time)

  // SNO family. size0 is the coefficient count (SNO) or grid point count
  // (xSNO/xcSNO) along the spatial axis; size1 the same for the second axis
  // when dim = 2. features is the function count carried between layers.
  std::size_t size0 = 33;
  std::size_t size1 = 0;
  std::size_t features = 20;
  std::size_t n2_layers = 3;
  Activation act = Activation::Softplus;
  bool real_weights = false;  // ablation: restrict all weights to real

  // FNO (dim 1 only): uniform grid, channel width, retained modes, layers.
  std::size_t fno_grid = 64;
  std::size_t fno_width = 64;
  std::size_t fno_modes = 16;
  std::size_t fno_layers = 4;

  // DeepONet: branch sensors, dense width/depth, shared basis count, output
  // query grid (queries1 for dim 2). don_cheb selects Chebyshev sensor/query
  // grids instead of uniform ones.
  std::size_t don_sensors = 33;
  std::size_t don_width = 100;
  std::size_t don_depth = 4;
  std::size_t don_basis = 100;
  std::size_t don_queries = 33;
  std::size_t don_queries1 = 0;
  bool don_cheb = false;
};

// Named parameter tensors in the declared (checkpoint) order. real_only marks
// tensors whose imaginary parts are pinned to zero (FNO spatial weights,
// DeepONet, and everything under real_weights).
struct Params {
  std::vector<std::string> names;
  std::vector<ad::Tensor> tensors;
  std::vector<bool> real_only;

  std::size_t count() const { return tensors.size(); }
  // Real degrees of freedom: 2 per complex entry, 1 per real_only entry.
  std::size_t scalar_count() const;
};

// Deterministic initialization: every linear tensor entry N(0,1)/fan_in per
// real component, biases N(0,1); one RNG stream consumed in declared order.
Params init_params(const ModelSpec& spec, std::uint64_t seed);

struct BuiltModel {
  std::vector<int> param_nodes;  // tape ids, same order as Params
  int output = -1;
};

// Builds the forward graph for one batch; input layout per architecture:
//   SNO:      [B, size0(*size1), 1] coefficients
//   xSNO:     [B, size0(*size1), 1] grid values
//   xcSNO:    [B, size0, 1] grid values (dim 1)
//   FNO:      [B, fno_grid, 2] (value, coordinate) channels
//   DeepONet: [B, 1, don_sensors] sensor values
BuiltModel model_forward(ad::Tape& tape, const ModelSpec& spec, const Params& params,
                         const ad::Tensor& input);

// Basis of the model's spatial axis (axis 0); dim-2 models pair it with a
// Chebyshev axis 1.
AxisBasis model_axis0(const ModelSpec& spec);

// Dataset conversion. pack_inputs chops/pads coefficient inputs (SNO) or
// samples values on the model grid (others); 1D inputs to dim-2 models are
// lifted as constants along axis 1. pack_targets produces the tensor the loss
// compares against in the model's native output representation.
ad::Tensor pack_inputs(const ModelSpec& spec, const std::vector<CoeffSeries>& inputs);
ad::Tensor pack_targets(const ModelSpec& spec, const std::vector<CoeffSeries>& targets);

// One sample of a forward-output tensor as a CoeffSeries (grid outputs are
// transformed; SNO outputs reinterpreted directly).
CoeffSeries output_series(const ModelSpec& spec, const ad::Tensor& out, std::size_t sample);

// Values of a (possibly Chebyshev) series on the uniform evaluation grid of
// size m (Fourier axes synthesize exactly; Chebyshev axes use Clenshaw).
std::vector<cplx> values_on_uniform(const CoeffSeries& s, std::size_t m);
std::vector<cplx> values_on_uniform_2d(const CoeffSeries& s, std::size_t m0, std::size_t m1);

}  // namespace sno
