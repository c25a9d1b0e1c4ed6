#include "sno/training.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sno/errors.hpp"
#include "sno/rng.hpp"

namespace sno {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

ad::Tensor tensor_subset(const ad::Tensor& t, const std::vector<std::size_t>& idx) {
  ad::Tensor out = ad::Tensor::zeros(idx.size(), t.rows, t.cols);
  for (std::size_t b = 0; b < idx.size(); ++b) out.block(b) = t.block(idx[b]);
  return out;
}

}  // namespace

AdamState make_adam_state(const Params& params) {
  AdamState st;
  for (const ad::Tensor& t : params.tensors) {
    st.m.push_back(ad::Tensor::zeros(t.batch, t.rows, t.cols));
    st.v.push_back(ad::Tensor::zeros(t.batch, t.rows, t.cols));
  }
  return st;
}

void adam_step(Params& params, const std::vector<ad::Tensor>& grads, AdamState& state,
               const TrainConfig& cfg) {
  detail::require(grads.size() == params.tensors.size(), "adam: gradient count mismatch");
  const double alpha =
      cfg.lr * std::pow(cfg.decay, static_cast<double>(state.step / cfg.decay_interval));
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(kBeta1, t);
  const double bc2 = 1.0 - std::pow(kBeta2, t);
  for (std::size_t i = 0; i < params.tensors.size(); ++i) {
    cplx* p = params.tensors[i].m.data();
    cplx* m = state.m[i].m.data();
    cplx* v = state.v[i].m.data();
    const cplx* g = grads[i].m.data();
    const bool ro = params.real_only[i];
    const Eigen::Index total = params.tensors[i].m.size();
    detail::require(grads[i].m.size() == total, "adam: gradient shape mismatch");
    for (Eigen::Index j = 0; j < total; ++j) {
      const double gr = g[j].real();
      const double gi = ro ? 0.0 : g[j].imag();
      const double mr = kBeta1 * m[j].real() + (1.0 - kBeta1) * gr;
      const double mi = kBeta1 * m[j].imag() + (1.0 - kBeta1) * gi;
      const double vr = kBeta2 * v[j].real() + (1.0 - kBeta2) * gr * gr;
      const double vi = kBeta2 * v[j].imag() + (1.0 - kBeta2) * gi * gi;
      m[j] = cplx(mr, mi);
      v[j] = cplx(vr, vi);
      const double dr = alpha * (mr / bc1) / (std::sqrt(vr / bc2) + kEps);
      const double di = alpha * (mi / bc1) / (std::sqrt(vi / bc2) + kEps);
      p[j] = cplx(p[j].real() - dr, ro ? 0.0 : p[j].imag() - di);
    }
  }
}

ad::Tensor forward_values(const ModelSpec& spec, const Params& params, const ad::Tensor& inputs) {
  ad::Tape tape;
  BuiltModel built = model_forward(tape, spec, params, inputs);
  return tape.value(built.output);
}

double batch_loss(const ModelSpec& spec, const Params& params, const Dataset& data) {
  ad::Tape tape;
  BuiltModel built = model_forward(tape, spec, params, data.inputs);
  const int loss = tape.rel_l2_mean(built.output, data.targets);
  return tape.scalar(loss);
}

namespace {

[[noreturn]] void nan_abort(std::size_t epoch, const Params& params) {
  std::ostringstream msg;
  msg << "training aborted: NaN loss at epoch " << epoch << "; parameter norms:";
  for (std::size_t i = 0; i < params.tensors.size(); ++i)
    msg << ' ' << params.names[i] << '=' << params.tensors[i].m.norm();
  throw std::runtime_error(msg.str());
}

}  // namespace

TrainHistory train_loop(const ModelSpec& spec, Params& params, const Dataset& train,
                        const Dataset* test, const TrainConfig& cfg) {
  detail::require(train.inputs.batch >= 1, "train_loop: empty dataset");
  detail::require(train.inputs.batch == train.targets.batch,
                  "train_loop: input/target counts differ");
  AdamState st = make_adam_state(params);
  TrainHistory hist;
  const std::size_t n = train.inputs.batch;
  const std::size_t bsz = (cfg.batch == 0 || cfg.batch >= n) ? n : cfg.batch;
  std::vector<std::size_t> order(n);
  std::vector<ad::Tensor> grads(params.count());

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t steps = 0;
    if (bsz == n) {
      ad::Tape tape;
      BuiltModel built = model_forward(tape, spec, params, train.inputs);
      const int loss = tape.rel_l2_mean(built.output, train.targets);
      const double lv = tape.scalar(loss);
      if (!std::isfinite(lv)) nan_abort(epoch, params);
      tape.backward(loss);
      for (std::size_t i = 0; i < params.count(); ++i)
        grads[i] = tape.adjoint(built.param_nodes[i]);
      adam_step(params, grads, st, cfg);
      epoch_loss = lv;
      steps = 1;
    } else {
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      rng::Stream shuffle(rng::derive(cfg.seed, "shuffle", epoch));
      for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(shuffle.uniform() * static_cast<double>(i));
        std::swap(order[i - 1], order[j < i ? j : i - 1]);
      }
      for (std::size_t start = 0; start < n; start += bsz) {
        const std::size_t stop = std::min(n, start + bsz);
        const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(stop));
        Dataset mini{tensor_subset(train.inputs, idx), tensor_subset(train.targets, idx)};
        ad::Tape tape;
        BuiltModel built = model_forward(tape, spec, params, mini.inputs);
        const int loss = tape.rel_l2_mean(built.output, mini.targets);
        const double lv = tape.scalar(loss);
        if (!std::isfinite(lv)) nan_abort(epoch, params);
        tape.backward(loss);
        for (std::size_t i = 0; i < params.count(); ++i)
          grads[i] = tape.adjoint(built.param_nodes[i]);
        adam_step(params, grads, st, cfg);
        epoch_loss += lv;
        steps += 1;
      }
    }
    const bool log = cfg.log_interval > 0 &&
                     (epoch % cfg.log_interval == 0 || epoch + 1 == cfg.epochs);
    if (log) {
      hist.epoch.push_back(epoch);
      hist.train_loss.push_back(epoch_loss / static_cast<double>(steps));
      hist.test_loss.push_back(test != nullptr ? batch_loss(spec, params, *test) : -1.0);
    }
  }
  return hist;
}

double evaluate_on_uniform(const ModelSpec& spec, const Params& params,
                           const std::vector<CoeffSeries>& inputs,
                           const std::vector<CoeffSeries>& targets, std::size_t eval_grid,
                           std::size_t eval_grid1) {
  detail::require(!inputs.empty() && inputs.size() == targets.size(),
                  "evaluate_on_uniform: bad dataset");
  const std::size_t m1 = eval_grid1 == 0 ? eval_grid : eval_grid1;
  const ad::Tensor in = pack_inputs(spec, inputs);
  const ad::Tensor out = forward_values(spec, params, in);
  double acc = 0.0;
  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const CoeffSeries pred = output_series(spec, out, b);
    std::vector<cplx> pv, tv;
    if (targets[b].rank() == 2) {
      detail::require(pred.rank() == 2, "prediction rank mismatch");
      pv = values_on_uniform_2d(pred, eval_grid, m1);
      tv = values_on_uniform_2d(targets[b], eval_grid, m1);
    } else {
      pv = values_on_uniform(pred, eval_grid);
      tv = values_on_uniform(targets[b], eval_grid);
    }
    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      diff2 += std::norm(pv[i] - tv[i]);
      ref2 += std::norm(tv[i]);
    }
    detail::require(ref2 > 0.0, "evaluate_on_uniform: zero-norm target");
    acc += std::sqrt(diff2 / ref2);
  }
  return acc / static_cast<double>(inputs.size());
}

double gradient_check(const ModelSpec& spec, const Params& params, const Dataset& data,
                      double step) {
  ad::Tape tape;
  BuiltModel built = model_forward(tape, spec, params, data.inputs);
  const int loss = tape.rel_l2_mean(built.output, data.targets);
  tape.backward(loss);
  std::vector<ad::Tensor> grads(params.count());
  for (std::size_t i = 0; i < params.count(); ++i) grads[i] = tape.adjoint(built.param_nodes[i]);

  Params work = params;
  auto loss_at = [&]() { return batch_loss(spec, work, data); };
  // Central differences carry absolute noise ~ eps * L / step regardless of
  // the component size; below this magnitude FD cannot certify anything, so
  // the comparison floor never drops under it.
  const double fd_floor = 3e-5 * std::max(1.0, tape.scalar(loss));
  double max_rel = 0.0;
  for (std::size_t i = 0; i < params.count(); ++i) {
    cplx* p = work.tensors[i].m.data();
    const cplx* g = grads[i].m.data();
    const Eigen::Index total = work.tensors[i].m.size();
    const int comps = params.real_only[i] ? 1 : 2;
    // Components far below the tensor's gradient scale are checked against
    // that scale instead of themselves: their central differences sit at the
    // eps*L/(2 step) roundoff floor, which says nothing about the adjoint.
    double scale = 0.0;
    for (Eigen::Index j = 0; j < total; ++j)
      scale = std::max({scale, std::abs(g[j].real()),
                        comps == 2 ? std::abs(g[j].imag()) : 0.0});
    for (Eigen::Index j = 0; j < total; ++j) {
      for (int c = 0; c < comps; ++c) {
        const cplx orig = p[j];
        const cplx delta = c == 0 ? cplx(step, 0.0) : cplx(0.0, step);
        // Fourth-order central difference: coordinates with large chain gain
        // (in-network unnormalized transforms) make the h^2 truncation term of
        // the plain stencil visible at this tolerance.
        p[j] = orig + 2.0 * delta;
        const double lp2 = loss_at();
        p[j] = orig + delta;
        const double lp = loss_at();
        p[j] = orig - delta;
        const double lm = loss_at();
        p[j] = orig - 2.0 * delta;
        const double lm2 = loss_at();
        p[j] = orig;
        const double numeric = (-lp2 + 8.0 * lp - 8.0 * lm + lm2) / (12.0 * step);
        const double analytic = c == 0 ? g[j].real() : g[j].imag();
        const double denom =
            std::max({std::abs(numeric), std::abs(analytic), 0.02 * scale, fd_floor});
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
      }
    }
  }
  return max_rel;
}

namespace {

ordered_json spec_to_json(const ModelSpec& s) {
  ordered_json j;
  j["architecture"] = architecture_name(s.arch);
  j["dim"] = s.dim;
  j["size0"] = s.size0;
  j["size1"] = s.size1;
  j["features"] = s.features;
  j["n2_layers"] = s.n2_layers;
  j["activation"] = activation_name(s.act);
  j["real_weights"] = s.real_weights;
  j["fno_grid"] = s.fno_grid;
  j["fno_width"] = s.fno_width;
  j["fno_modes"] = s.fno_modes;
  j["fno_layers"] = s.fno_layers;
  j["don_sensors"] = s.don_sensors;
  j["don_width"] = s.don_width;
  j["don_depth"] = s.don_depth;
  j["don_basis"] = s.don_basis;
  j["don_queries"] = s.don_queries;
  j["don_queries1"] = s.don_queries1;
  j["don_cheb"] = s.don_cheb;
  return j;
}

ModelSpec spec_from_json(const ordered_json& j) {
  ModelSpec s;
  s.arch = architecture_from_name(j.at("architecture").get<std::string>());
  s.dim = j.at("dim").get<std::size_t>();
  s.size0 = j.at("size0").get<std::size_t>();
  s.size1 = j.at("size1").get<std::size_t>();
  s.features = j.at("features").get<std::size_t>();
  s.n2_layers = j.at("n2_layers").get<std::size_t>();
  s.act = activation_from_name(j.at("activation").get<std::string>());
  s.real_weights = j.at("real_weights").get<bool>();
  s.fno_grid = j.at("fno_grid").get<std::size_t>();
  s.fno_width = j.at("fno_width").get<std::size_t>();
  s.fno_modes = j.at("fno_modes").get<std::size_t>();
  s.fno_layers = j.at("fno_layers").get<std::size_t>();
  s.don_sensors = j.at("don_sensors").get<std::size_t>();
  s.don_width = j.at("don_width").get<std::size_t>();
  s.don_depth = j.at("don_depth").get<std::size_t>();
  s.don_basis = j.at("don_basis").get<std::size_t>();
  s.don_queries = j.at("don_queries").get<std::size_t>();
  s.don_queries1 = j.at("don_queries1").get<std::size_t>();
  s.don_cheb = j.at("don_cheb").get<bool>();
  return s;
}

ordered_json train_to_json(const TrainConfig& c) {
  ordered_json j;
  j["lr"] = c.lr;
  j["decay"] = c.decay;
  j["decay_interval"] = c.decay_interval;
  j["epochs"] = c.epochs;
  j["batch"] = c.batch;
  j["seed"] = c.seed;
  j["log_interval"] = c.log_interval;
  j["eval_grid"] = c.eval_grid;
  j["eval_grid1"] = c.eval_grid1;
  return j;
}

TrainConfig train_from_json(const ordered_json& j) {
  TrainConfig c;
  c.lr = j.at("lr").get<double>();
  c.decay = j.at("decay").get<double>();
  c.decay_interval = j.at("decay_interval").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch = j.at("batch").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.log_interval = j.at("log_interval").get<std::size_t>();
  c.eval_grid = j.at("eval_grid").get<std::size_t>();
  c.eval_grid1 = j.at("eval_grid1").get<std::size_t>();
  return c;
}

}  // namespace

void save_model(const std::string& path, const ModelSpec& spec, const Params& params,
                const TrainConfig& cfg, std::size_t epoch) {
  ordered_json j;
  j["format"] = "sno-model";
  j["version"] = 1;
  j["spec"] = spec_to_json(spec);
  j["train"] = train_to_json(cfg);
  j["epoch"] = epoch;
  j["params"] = ordered_json::array();
  for (std::size_t i = 0; i < params.count(); ++i) {
    ordered_json p;
    p["name"] = params.names[i];
    p["batch"] = params.tensors[i].batch;
    p["rows"] = params.tensors[i].rows;
    p["cols"] = params.tensors[i].cols;
    p["real_only"] = static_cast<bool>(params.real_only[i]);
    j["params"].push_back(p);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::numeric_check(out.good(), "cannot open " + path + " for writing");
  out << j.dump() << '\n';
  for (const ad::Tensor& t : params.tensors) {
    std::vector<double> flat(2 * static_cast<std::size_t>(t.m.size()));
    const cplx* d = t.m.data();
    for (std::size_t k = 0; k < static_cast<std::size_t>(t.m.size()); ++k) {
      flat[2 * k] = d[k].real();
      flat[2 * k + 1] = d[k].imag();
    }
    out.write(reinterpret_cast<const char*>(flat.data()),
              static_cast<std::streamsize>(flat.size() * sizeof(double)));
  }
  detail::numeric_check(out.good(), "short write to " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  detail::numeric_check(in.good(), "cannot open " + path);
  std::string line;
  std::getline(in, line);
  detail::numeric_check(in.good(), "missing manifest in " + path);
  ordered_json j = ordered_json::parse(line);
  detail::require(j.value("format", "") == "sno-model", "not a model checkpoint: " + path);

  LoadedModel out;
  out.spec = spec_from_json(j.at("spec"));
  out.config = train_from_json(j.at("train"));
  out.epoch = j.at("epoch").get<std::size_t>();
  for (const auto& p : j.at("params")) {
    const std::size_t batch = p.at("batch").get<std::size_t>();
    const std::size_t rows = p.at("rows").get<std::size_t>();
    const std::size_t cols = p.at("cols").get<std::size_t>();
    ad::Tensor t = ad::Tensor::zeros(batch, rows, cols);
    std::vector<double> flat(2 * t.size());
    in.read(reinterpret_cast<char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
    detail::numeric_check(static_cast<std::size_t>(in.gcount()) == flat.size() * sizeof(double),
                          "truncated blob in " + path);
    cplx* d = t.m.data();
    for (std::size_t k = 0; k < t.size(); ++k) d[k] = cplx(flat[2 * k], flat[2 * k + 1]);
    out.params.names.push_back(p.at("name").get<std::string>());
    out.params.tensors.push_back(std::move(t));
    out.params.real_only.push_back(p.at("real_only").get<bool>());
  }
  detail::require(out.params.count() > 0, "checkpoint has no parameters");
  return out;
}

}  // namespace sno
