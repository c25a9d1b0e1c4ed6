#include "sno/models.hpp"

#include <algorithm>

#include "sno/errors.hpp"
#include "sno/rng.hpp"
#include "sno/transforms.hpp"

namespace sno {

std::string architecture_name(Architecture a) {
  switch (a) {
    case Architecture::SNO_Ch:
      return "sno_ch";
    case Architecture::SNO_F:
      return "sno_f";
    case Architecture::xSNO_Ch:
      return "xsno_ch";
    case Architecture::xSNO_F:
      return "xsno_f";
    case Architecture::xcSNO_Ch:
      return "xcsno_ch";
    case Architecture::xcSNO_F:
      return "xcsno_f";
    case Architecture::FNO:
      return "fno";
    case Architecture::DeepONet:
      return "deeponet";
  }
  return "unknown";
}

Architecture architecture_from_name(const std::string& name) {
  if (name == "sno_ch") return Architecture::SNO_Ch;
  if (name == "sno_f") return Architecture::SNO_F;
  if (name == "xsno_ch") return Architecture::xSNO_Ch;
  if (name == "xsno_f") return Architecture::xSNO_F;
  if (name == "xcsno_ch") return Architecture::xcSNO_Ch;
  if (name == "xcsno_f") return Architecture::xcSNO_F;
  if (name == "fno") return Architecture::FNO;
  if (name == "deeponet") return Architecture::DeepONet;
  detail::require(false, "unknown architecture name: " + name);
  return Architecture::SNO_Ch;
}

namespace {

bool sno_family(Architecture a) {
  return a == Architecture::SNO_Ch || a == Architecture::SNO_F || a == Architecture::xSNO_Ch ||
         a == Architecture::xSNO_F;
}

bool cheb_axis(Architecture a) {
  return a == Architecture::SNO_Ch || a == Architecture::xSNO_Ch || a == Architecture::xcSNO_Ch;
}

struct ParamDef {
  std::string name;
  std::size_t batch = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double fan_in = 0.0;  // 0 marks a bias (unit variance)
  bool real_only = false;
};

std::vector<ParamDef> param_defs(const ModelSpec& spec) {
  std::vector<ParamDef> defs;
  auto lin = [&](const std::string& name, std::size_t r, std::size_t c, std::size_t fan,
                 bool ro = false, std::size_t batch = 1) {
    defs.push_back({name, batch, r, c, static_cast<double>(fan), ro});
  };
  auto bias = [&](const std::string& name, std::size_t r, std::size_t c, bool ro = false) {
    defs.push_back({name, 1, r, c, 0.0, ro});
  };

  switch (spec.arch) {
    case Architecture::SNO_Ch:
    case Architecture::SNO_F:
    case Architecture::xSNO_Ch:
    case Architecture::xSNO_F: {
      const bool ro = spec.real_weights;
      const std::size_t k = spec.size0 * std::max<std::size_t>(spec.size1, 1);
      const std::size_t f = spec.features;
      lin("n1.A", 1, f, 1, ro);
      bias("n1.b", k, 1, ro);
      for (std::size_t i = 0; i < spec.n2_layers; ++i) {
        const std::string p = "n2." + std::to_string(i) + ".";
        if (spec.dim == 1) {
          lin(p + "B", spec.size0, spec.size0, spec.size0, ro);
        } else {
          lin(p + "Bx", spec.size0, spec.size0, spec.size0, ro);
          lin(p + "Bt", spec.size1, spec.size1, spec.size1, ro);
        }
        lin(p + "A", f, f, f, ro);
        bias(p + "b", k, f, ro);
      }
      lin("n3.A", f, 1, f, ro);
      bias("n3.b", k, 1, ro);
      break;
    }
    case Architecture::xcSNO_Ch:
    case Architecture::xcSNO_F: {
      const bool ro = spec.real_weights;
      const std::size_t m = spec.size0;
      const std::size_t f = spec.features;
      auto block = [&](const std::string& p, std::size_t fin, std::size_t fout) {
        lin(p + "B", m, m, m, ro);
        lin(p + "A", fin, fout, fin, ro);
        bias(p + "b", m, fout, ro);
      };
      block("gin.0.", 1, f);
      block("gin.1.", f, f);
      for (std::size_t i = 0; i < 3; ++i) block("coef." + std::to_string(i) + ".", f, f);
      block("gout.0.", f, f);
      block("gout.1.", f, 1);
      break;
    }
    case Architecture::FNO: {
      const std::size_t w = spec.fno_width;
      lin("lift.W", 2, w, 2, true);
      bias("lift.b", 1, w, true);
      for (std::size_t i = 0; i < spec.fno_layers; ++i) {
        const std::string p = std::to_string(i) + ".";
        lin("spec." + p + "R", w, w, w, false, spec.fno_modes);
        lin("skip." + p + "W", w, w, w, true);
        bias("skip." + p + "b", 1, w, true);
      }
      lin("proj.W", w, 1, w, true);
      bias("proj.b", 1, 1, true);
      break;
    }
    case Architecture::DeepONet: {
      const std::size_t w = spec.don_width;
      auto dense_stack = [&](const std::string& net, std::size_t in_dim) {
        for (std::size_t i = 0; i < spec.don_depth; ++i) {
          const std::size_t fin = i == 0 ? in_dim : w;
          const std::string p = net + "." + std::to_string(i) + ".";
          lin(p + "W", fin, w, fin, true);
          bias(p + "b", 1, w, true);
        }
        lin(net + ".head.W", w, spec.don_basis, w, true);
        bias(net + ".head.b", 1, spec.don_basis, true);
      };
      dense_stack("branch", spec.don_sensors);
      dense_stack("trunk", spec.dim);
      bias("out.b", 1, 1, true);
      break;
    }
  }
  return defs;
}

void validate_spec(const ModelSpec& spec) {
  detail::require(spec.dim == 1 || spec.dim == 2, "model dim must be 1 or 2");
  if (spec.dim == 2) {
    detail::require(sno_family(spec.arch) || spec.arch == Architecture::DeepONet,
                    "dim 2 supported for SNO/xSNO/DeepONet only");
    if (sno_family(spec.arch)) detail::require(spec.size1 >= 1, "dim 2 model needs size1");
  }
  if (sno_family(spec.arch) || spec.arch == Architecture::xcSNO_Ch ||
      spec.arch == Architecture::xcSNO_F) {
    detail::require(spec.size0 >= 2 && spec.features >= 1 && spec.n2_layers >= 1,
                    "bad SNO sizes");
  }
  if (spec.arch == Architecture::FNO) {
    detail::require(spec.fno_grid >= 2 * spec.fno_modes + 1,
                    "FNO grid must have at least 2*modes+1 points");
  }
  if (spec.arch == Architecture::DeepONet) {
    detail::require(spec.don_sensors >= 1 && spec.don_width >= 1 && spec.don_depth >= 1 &&
                        spec.don_basis >= 1 && spec.don_queries >= 2,
                    "bad DeepONet sizes");
    if (spec.dim == 2) detail::require(spec.don_queries1 >= 2, "dim 2 DeepONet needs queries1");
  }
}

}  // namespace

std::size_t Params::scalar_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i)
    n += tensors[i].size() * (real_only[i] ? 1 : 2);
  return n;
}

Params init_params(const ModelSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  Params p;
  rng::Stream stream(rng::derive(seed, "params"));
  for (const ParamDef& def : param_defs(spec)) {
    ad::Tensor t = ad::Tensor::zeros(def.batch, def.rows, def.cols);
    const double s = def.fan_in > 0.0 ? 1.0 / def.fan_in : 1.0;
    cplx* d = t.m.data();
    const Eigen::Index total = t.m.size();
    for (Eigen::Index i = 0; i < total; ++i) {
      const double re = stream.normal() * s;
      const double im = def.real_only ? 0.0 : stream.normal() * s;
      d[i] = cplx(re, im);
    }
    p.names.push_back(def.name);
    p.tensors.push_back(std::move(t));
    p.real_only.push_back(def.real_only);
  }
  return p;
}

AxisBasis model_axis0(const ModelSpec& spec) {
  if (spec.arch == Architecture::FNO) return AxisBasis{BasisKind::Fourier, true};
  if (spec.arch == Architecture::DeepONet)
    return spec.don_cheb ? AxisBasis{BasisKind::Chebyshev, true}
                         : AxisBasis{BasisKind::Fourier, true};
  if (cheb_axis(spec.arch)) return AxisBasis{BasisKind::Chebyshev, true};
  return AxisBasis{BasisKind::Fourier, true};
}

namespace {

// Chebyshev axis 1 used by every dim-2 model (the paper's time axis).
const AxisBasis kChebAxis{BasisKind::Chebyshev, true};

}  // namespace

BuiltModel model_forward(ad::Tape& tape, const ModelSpec& spec, const Params& params,
                         const ad::Tensor& input) {
  validate_spec(spec);
  detail::require(params.count() == param_defs(spec).size(),
                  "parameter list does not match the model spec");
  BuiltModel built;
  built.param_nodes.reserve(params.count());
  for (const ad::Tensor& t : params.tensors) built.param_nodes.push_back(tape.parameter(t));
  std::size_t cursor = 0;
  auto next = [&]() { return built.param_nodes[cursor++]; };
  const int x = tape.constant(input);

  switch (spec.arch) {
    case Architecture::SNO_Ch:
    case Architecture::SNO_F:
    case Architecture::xSNO_Ch:
    case Architecture::xSNO_F: {
      const std::size_t k = spec.size0 * std::max<std::size_t>(spec.size1, 1);
      detail::require(input.rows == k && input.cols == 1, "SNO input shape mismatch");
      int h = tape.matmul(x, next());
      h = tape.add_col_bias(h, next());
      h = tape.activation(h, spec.act);
      for (std::size_t i = 0; i < spec.n2_layers; ++i) {
        if (spec.dim == 1) {
          h = tape.lmatmul(next(), h);
        } else {
          // rows flatten as i_x * size1 + i_t: axis 1 of the column-major
          // (size1, size0) view is x, axis 0 is t.
          const int bx = next();
          const int bt = next();
          h = tape.lmatmul_axis(bx, h, spec.size1, spec.size0, 1);
          h = tape.lmatmul_axis(bt, h, spec.size1, spec.size0, 0);
        }
        h = tape.matmul(h, next());
        h = tape.add(h, next());
        h = tape.activation(h, spec.act);
      }
      h = tape.matmul(h, next());
      h = tape.add_col_bias(h, next());
      built.output = h;
      break;
    }
    case Architecture::xcSNO_Ch:
    case Architecture::xcSNO_F: {
      detail::require(input.rows == spec.size0 && input.cols == 1, "xcSNO input shape mismatch");
      const bool fourier = spec.arch == Architecture::xcSNO_F;
      auto block = [&](int h, bool act) {
        h = tape.lmatmul(next(), h);
        h = tape.matmul(h, next());
        h = tape.add(h, next());
        if (act) h = tape.activation(h, spec.act);
        return h;
      };
      int h = block(x, true);
      h = block(h, true);
      h = fourier ? tape.fft(h) : tape.dct_analysis(h);
      const int residual_in = h;
      for (std::size_t i = 0; i < 3; ++i) h = block(h, true);
      h = tape.add(h, residual_in);
      h = fourier ? tape.ifft(h) : tape.dct_synthesis(h);
      h = block(h, true);
      h = block(h, false);
      built.output = h;
      break;
    }
    case Architecture::FNO: {
      detail::require(input.rows == spec.fno_grid && input.cols == 2, "FNO input shape mismatch");
      int h = tape.matmul(x, next());
      h = tape.add_row_bias(h, next());
      for (std::size_t i = 0; i < spec.fno_layers; ++i) {
        const int r = next();
        const int wskip = next();
        const int bskip = next();
        int c = tape.rfft(h, spec.fno_modes);
        c = tape.mode_matmul(c, r);
        const int s = tape.irfft(c, spec.fno_grid);
        int p = tape.matmul(h, wskip);
        p = tape.add_row_bias(p, bskip);
        h = tape.add(s, p);
        h = tape.activation(h, spec.act);
      }
      h = tape.matmul(h, next());
      h = tape.add_row_bias(h, next());
      built.output = h;
      break;
    }
    case Architecture::DeepONet: {
      detail::require(input.rows == 1 && input.cols == spec.don_sensors,
                      "DeepONet input shape mismatch");
      auto dense_stack = [&](int h) {
        for (std::size_t i = 0; i < spec.don_depth; ++i) {
          h = tape.matmul(h, next());
          h = tape.add_row_bias(h, next());
          h = tape.activation(h, spec.act);
        }
        h = tape.matmul(h, next());
        h = tape.add_row_bias(h, next());
        return h;
      };
      const int branch = dense_stack(x);

      const std::size_t q0 = spec.don_queries;
      const std::size_t q1 = spec.dim == 2 ? spec.don_queries1 : 1;
      ad::Tensor coords = ad::Tensor::zeros(1, q0 * q1, spec.dim);
      const std::vector<double> x0 =
          spec.don_cheb ? cheb_points(q0 - 1) : uniform_points(q0);
      const std::vector<double> x1 = spec.dim == 2 ? cheb_points(q1 - 1) : std::vector<double>{};
      for (std::size_t i = 0; i < q0; ++i) {
        for (std::size_t j = 0; j < q1; ++j) {
          const Eigen::Index r = static_cast<Eigen::Index>(i * q1 + j);
          coords.m(r, 0) = x0[i];
          if (spec.dim == 2) coords.m(r, 1) = x1[j];
        }
      }
      const int trunk = dense_stack(tape.constant(std::move(coords)));

      int out = tape.matmul(branch, trunk, /*transpose_w=*/true);
      out = tape.add_col_bias(out, next());
      built.output = out;
      break;
    }
  }
  detail::require(cursor == params.count(), "not all parameters consumed by forward");
  return built;
}

namespace {

// Chops or zero-pads every axis of s to the requested shape.
CoeffSeries fit_shape(CoeffSeries s, const std::vector<std::size_t>& shape) {
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (s.shape[a] > shape[a])
      s = chop(s, shape[a], a);
    else if (s.shape[a] < shape[a])
      s = pad(s, shape[a], a);
  }
  return s;
}

// Re-expands s along axis 0 in the target basis with `size` coefficients.
// Same basis: chop/pad. Different basis: resample on the target natural grid
// (the smoothing route: band content beyond the new grid aliases).
CoeffSeries convert_axis0(const CoeffSeries& s, const AxisBasis& target, std::size_t size) {
  detail::require(s.rank() == 1, "convert_axis0 expects a 1D series");
  if (s.axes[0].kind == target.kind && (target.kind != BasisKind::Fourier ||
                                        s.axes[0].real_signal == target.real_signal)) {
    return fit_shape(s, {size});
  }
  const std::size_t grid = natural_grid_size(target, size);
  const GridKind kind =
      target.kind == BasisKind::Chebyshev ? GridKind::Chebyshev : GridKind::Uniform;
  const std::vector<double> xs =
      kind == GridKind::Chebyshev ? cheb_points(grid - 1) : uniform_points(grid);
  GridFunction g = GridFunction::zeros({kind}, {grid});
  for (std::size_t j = 0; j < grid; ++j) g.values[j] = evaluate(s, xs[j]);
  CoeffSeries out = target.kind == BasisKind::Chebyshev
                        ? cheb_analysis(g)
                        : fourier_analysis(g, target.real_signal);
  return fit_shape(out, {size});
}

}  // namespace

std::vector<cplx> values_on_uniform(const CoeffSeries& s, std::size_t m) {
  detail::require(s.rank() == 1, "values_on_uniform expects 1D");
  if (s.axes[0].kind == BasisKind::Fourier) {
    return fourier_synthesis(s, m).values;
  }
  std::vector<cplx> out(m);
  const std::vector<double> xs = uniform_points(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = evaluate(s, xs[j]);
  return out;
}

std::vector<cplx> values_on_uniform_2d(const CoeffSeries& s, std::size_t m0, std::size_t m1) {
  detail::require(s.rank() == 2, "values_on_uniform_2d expects 2D");
  const std::size_t n0 = s.shape[0];
  const std::size_t n1 = s.shape[1];
  const std::vector<double> t1 = uniform_points(m1);
  // pass 1: collapse axis 1 at the m1 evaluation abscissae
  std::vector<cplx> mid(n0 * m1);
  for (std::size_t i = 0; i < n0; ++i) {
    CoeffSeries row = CoeffSeries::d1(
        s.axes[1], std::vector<cplx>(s.coeffs.begin() + static_cast<std::ptrdiff_t>(i * n1),
                                     s.coeffs.begin() + static_cast<std::ptrdiff_t>((i + 1) * n1)));
    for (std::size_t j = 0; j < m1; ++j) mid[i * m1 + j] = evaluate(row, t1[j]);
  }
  // pass 2: collapse axis 0
  std::vector<cplx> out(m0 * m1);
  const std::vector<double> t0 = uniform_points(m0);
  std::vector<cplx> col(n0);
  for (std::size_t j = 0; j < m1; ++j) {
    for (std::size_t i = 0; i < n0; ++i) col[i] = mid[i * m1 + j];
    CoeffSeries cs = CoeffSeries::d1(s.axes[0], col);
    for (std::size_t i = 0; i < m0; ++i) out[i * m1 + j] = evaluate(cs, t0[i]);
  }
  return out;
}

namespace {

// Values of an input/target series on the model's native grid, flattened in
// row-major (axis0-major) order. 1D series feeding a dim-2 model are constant
// along axis 1.
std::vector<cplx> native_grid_values(const ModelSpec& spec, const CoeffSeries& s,
                                     std::size_t g0, std::size_t g1) {
  const AxisBasis a0 = model_axis0(spec);
  const GridKind k0 = a0.kind == BasisKind::Chebyshev ? GridKind::Chebyshev : GridKind::Uniform;
  if (spec.dim == 1) {
    detail::require(s.rank() == 1, "dim-1 model needs 1D data");
    CoeffSeries c = convert_axis0(s, a0, coeff_count_for_grid(a0, g0));
    return interpolate_to_grid(c, {g0}, {k0}).values;
  }
  if (s.rank() == 1) {
    CoeffSeries c = convert_axis0(s, a0, coeff_count_for_grid(a0, g0));
    GridFunction line = interpolate_to_grid(c, {g0}, {k0});
    std::vector<cplx> out(g0 * g1);
    for (std::size_t i = 0; i < g0; ++i)
      for (std::size_t j = 0; j < g1; ++j) out[i * g1 + j] = line.values[i];
    return out;
  }
  detail::require(s.axes[1].kind == BasisKind::Chebyshev, "axis 1 must be Chebyshev");
  if (s.axes[0] == a0) {
    return interpolate_to_grid(s, {g0, g1}, {k0, GridKind::Chebyshev}).values;
  }
  // basis change on axis 0: collapse axis 1 at the Chebyshev time nodes, then
  // resample each time slice independently
  const std::size_t n0 = s.shape[0];
  const std::size_t n1 = s.shape[1];
  const std::vector<double> tj = cheb_points(g1 - 1);
  std::vector<cplx> out(g0 * g1);
  std::vector<cplx> slice(n0);
  for (std::size_t j = 0; j < g1; ++j) {
    for (std::size_t i = 0; i < n0; ++i) {
      CoeffSeries row = CoeffSeries::d1(
          s.axes[1],
          std::vector<cplx>(s.coeffs.begin() + static_cast<std::ptrdiff_t>(i * n1),
                            s.coeffs.begin() + static_cast<std::ptrdiff_t>((i + 1) * n1)));
      slice[i] = evaluate(row, tj[j]);
    }
    CoeffSeries line = CoeffSeries::d1(s.axes[0], slice);
    CoeffSeries conv = convert_axis0(line, a0, coeff_count_for_grid(a0, g0));
    GridFunction gl = interpolate_to_grid(conv, {g0}, {k0});
    for (std::size_t i = 0; i < g0; ++i) out[i * g1 + j] = gl.values[i];
  }
  return out;
}

ad::Tensor pack_coefficients(const ModelSpec& spec, const std::vector<CoeffSeries>& data) {
  const AxisBasis a0 = model_axis0(spec);
  const std::size_t k = spec.size0 * std::max<std::size_t>(spec.size1, 1);
  ad::Tensor t = ad::Tensor::zeros(data.size(), k, 1);
  for (std::size_t b = 0; b < data.size(); ++b) {
    const CoeffSeries& s = data[b];
    if (spec.dim == 1) {
      CoeffSeries c = convert_axis0(s, a0, spec.size0);
      for (std::size_t i = 0; i < spec.size0; ++i)
        t.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = c.coeffs[i];
      continue;
    }
    if (s.rank() == 1) {
      CoeffSeries c = convert_axis0(s, a0, spec.size0);
      for (std::size_t i = 0; i < spec.size0; ++i)
        t.m(static_cast<Eigen::Index>(i * spec.size1), static_cast<Eigen::Index>(b)) =
            c.coeffs[i];
      continue;
    }
    detail::require(s.axes[1].kind == BasisKind::Chebyshev, "axis 1 must be Chebyshev");
    detail::require(s.axes[0] == a0, "basis mismatch between input and model");
    CoeffSeries c = fit_shape(s, {spec.size0, spec.size1});
    for (std::size_t i = 0; i < k; ++i)
      t.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = c.coeffs[i];
  }
  return t;
}

ad::Tensor pack_grid_values(const ModelSpec& spec, const std::vector<CoeffSeries>& data,
                            std::size_t g0, std::size_t g1) {
  const std::size_t rows = g0 * std::max<std::size_t>(g1, 1);
  ad::Tensor t = ad::Tensor::zeros(data.size(), rows, 1);
  for (std::size_t b = 0; b < data.size(); ++b) {
    const std::vector<cplx> v = native_grid_values(spec, data[b], g0, g1);
    for (std::size_t i = 0; i < rows; ++i)
      t.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = v[i];
  }
  return t;
}

}  // namespace

ad::Tensor pack_inputs(const ModelSpec& spec, const std::vector<CoeffSeries>& inputs) {
  validate_spec(spec);
  detail::require(!inputs.empty(), "empty input batch");
  switch (spec.arch) {
    case Architecture::SNO_Ch:
    case Architecture::SNO_F:
      return pack_coefficients(spec, inputs);
    case Architecture::xSNO_Ch:
    case Architecture::xSNO_F: {
      const std::size_t g1 = spec.dim == 2 ? spec.size1 : 0;
      return pack_grid_values(spec, inputs, spec.size0, g1);
    }
    case Architecture::xcSNO_Ch:
    case Architecture::xcSNO_F:
      return pack_grid_values(spec, inputs, spec.size0, 0);
    case Architecture::FNO: {
      ad::Tensor t = ad::Tensor::zeros(inputs.size(), spec.fno_grid, 2);
      const std::vector<double> xs = uniform_points(spec.fno_grid);
      for (std::size_t b = 0; b < inputs.size(); ++b) {
        detail::require(inputs[b].rank() == 1, "FNO needs 1D inputs");
        const std::vector<cplx> v = values_on_uniform(inputs[b], spec.fno_grid);
        for (std::size_t i = 0; i < spec.fno_grid; ++i) {
          t.block(b)(static_cast<Eigen::Index>(i), 0) = v[i];
          t.block(b)(static_cast<Eigen::Index>(i), 1) = xs[i];
        }
      }
      return t;
    }
    case Architecture::DeepONet: {
      ad::Tensor t = ad::Tensor::zeros(inputs.size(), 1, spec.don_sensors);
      for (std::size_t b = 0; b < inputs.size(); ++b) {
        detail::require(inputs[b].rank() == 1, "DeepONet branch needs 1D inputs");
        std::vector<cplx> v;
        if (spec.don_cheb) {
          const std::vector<double> xs = cheb_points(spec.don_sensors - 1);
          v.resize(spec.don_sensors);
          for (std::size_t i = 0; i < spec.don_sensors; ++i) v[i] = evaluate(inputs[b], xs[i]);
        } else {
          v = values_on_uniform(inputs[b], spec.don_sensors);
        }
        for (std::size_t i = 0; i < spec.don_sensors; ++i)
          t.block(b)(0, static_cast<Eigen::Index>(i)) = v[i];
      }
      return t;
    }
  }
  detail::require(false, "unreachable");
  return {};
}

ad::Tensor pack_targets(const ModelSpec& spec, const std::vector<CoeffSeries>& targets) {
  validate_spec(spec);
  detail::require(!targets.empty(), "empty target batch");
  switch (spec.arch) {
    case Architecture::SNO_Ch:
    case Architecture::SNO_F:
      return pack_coefficients(spec, targets);
    case Architecture::xSNO_Ch:
    case Architecture::xSNO_F: {
      const std::size_t g1 = spec.dim == 2 ? spec.size1 : 0;
      return pack_grid_values(spec, targets, spec.size0, g1);
    }
    case Architecture::xcSNO_Ch:
    case Architecture::xcSNO_F:
      return pack_grid_values(spec, targets, spec.size0, 0);
    case Architecture::FNO: {
      ad::Tensor t = ad::Tensor::zeros(targets.size(), spec.fno_grid, 1);
      for (std::size_t b = 0; b < targets.size(); ++b) {
        const std::vector<cplx> v = values_on_uniform(targets[b], spec.fno_grid);
        for (std::size_t i = 0; i < spec.fno_grid; ++i)
          t.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = v[i];
      }
      return t;
    }
    case Architecture::DeepONet: {
      const std::size_t q0 = spec.don_queries;
      const std::size_t q1 = spec.dim == 2 ? spec.don_queries1 : 1;
      ad::Tensor t = ad::Tensor::zeros(targets.size(), 1, q0 * q1);
      for (std::size_t b = 0; b < targets.size(); ++b) {
        std::vector<cplx> v;
        if (spec.dim == 2) {
          detail::require(targets[b].rank() == 2, "dim-2 DeepONet needs 2D targets");
          const std::vector<double> xs =
              spec.don_cheb ? cheb_points(q0 - 1) : uniform_points(q0);
          const std::vector<double> ts = cheb_points(q1 - 1);
          v.resize(q0 * q1);
          for (std::size_t i = 0; i < q0; ++i)
            for (std::size_t j = 0; j < q1; ++j)
              v[i * q1 + j] = evaluate(targets[b], xs[i], ts[j]);
        } else if (spec.don_cheb) {
          const std::vector<double> xs = cheb_points(q0 - 1);
          v.resize(q0);
          for (std::size_t i = 0; i < q0; ++i) v[i] = evaluate(targets[b], xs[i]);
        } else {
          v = values_on_uniform(targets[b], q0);
        }
        for (std::size_t i = 0; i < v.size(); ++i)
          t.block(b)(0, static_cast<Eigen::Index>(i)) = v[i];
      }
      return t;
    }
  }
  detail::require(false, "unreachable");
  return {};
}

CoeffSeries output_series(const ModelSpec& spec, const ad::Tensor& out, std::size_t sample) {
  validate_spec(spec);
  detail::require(sample < out.batch, "sample index out of range");
  const AxisBasis a0 = model_axis0(spec);
  const AxisBasis full_fourier{BasisKind::Fourier, false};

  auto column = [&](std::size_t rows) {
    std::vector<cplx> v(rows);
    for (std::size_t i = 0; i < rows; ++i)
      v[i] = out.block(sample)(static_cast<Eigen::Index>(i), 0);
    return v;
  };

  switch (spec.arch) {
    case Architecture::SNO_Ch:
    case Architecture::SNO_F: {
      const std::size_t k = spec.size0 * std::max<std::size_t>(spec.size1, 1);
      std::vector<cplx> v = column(k);
      if (spec.dim == 1) return CoeffSeries::d1(a0, std::move(v));
      CoeffSeries s = CoeffSeries::zeros({a0, kChebAxis}, {spec.size0, spec.size1});
      s.coeffs = std::move(v);
      return s;
    }
    case Architecture::xSNO_Ch:
    case Architecture::xSNO_F: {
      const std::size_t g1 = spec.dim == 2 ? spec.size1 : 1;
      std::vector<cplx> v = column(spec.size0 * g1);
      const AxisBasis out0 = a0.kind == BasisKind::Chebyshev ? a0 : full_fourier;
      const GridKind k0 =
          a0.kind == BasisKind::Chebyshev ? GridKind::Chebyshev : GridKind::Uniform;
      if (spec.dim == 1) {
        GridFunction g = GridFunction::d1(k0, std::move(v));
        return out0.kind == BasisKind::Chebyshev ? cheb_analysis(g)
                                                 : fourier_analysis(g, false);
      }
      GridFunction g = GridFunction::zeros({k0, GridKind::Chebyshev}, {spec.size0, g1});
      g.values = std::move(v);
      return analyze(g, {out0, kChebAxis});
    }
    case Architecture::xcSNO_Ch:
    case Architecture::xcSNO_F: {
      std::vector<cplx> v = column(spec.size0);
      if (spec.arch == Architecture::xcSNO_Ch) {
        return cheb_analysis(GridFunction::d1(GridKind::Chebyshev, std::move(v)));
      }
      return fourier_analysis(GridFunction::d1(GridKind::Uniform, std::move(v)), false);
    }
    case Architecture::FNO: {
      std::vector<cplx> v = column(spec.fno_grid);
      return fourier_analysis(GridFunction::d1(GridKind::Uniform, std::move(v)), false);
    }
    case Architecture::DeepONet: {
      const std::size_t q0 = spec.don_queries;
      const std::size_t q1 = spec.dim == 2 ? spec.don_queries1 : 1;
      std::vector<cplx> v(q0 * q1);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = out.block(sample)(0, static_cast<Eigen::Index>(i));
      const GridKind k0 = spec.don_cheb ? GridKind::Chebyshev : GridKind::Uniform;
      const AxisBasis out0 = spec.don_cheb ? AxisBasis{BasisKind::Chebyshev, true} : full_fourier;
      if (spec.dim == 1) {
        GridFunction g = GridFunction::d1(k0, std::move(v));
        return spec.don_cheb ? cheb_analysis(g) : fourier_analysis(g, false);
      }
      GridFunction g = GridFunction::zeros({k0, GridKind::Chebyshev}, {q0, q1});
      g.values = std::move(v);
      return analyze(g, {out0, kChebAxis});
    }
  }
  detail::require(false, "unreachable");
  return {};
}

}  // namespace sno
