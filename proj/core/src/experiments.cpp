#include "sno/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "sno/aliasing.hpp"
#include "sno/problems.hpp"
#include "sno/rng.hpp"
#include "sno/transforms.hpp"

namespace sno {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::size_t clamp_size(std::size_t v, std::size_t lo, std::size_t hi) {
  return std::max(lo, std::min(hi, v));
}

GeneratedSet make_set(const std::string& pid, std::size_t count, std::uint64_t seed, long k_min,
                      long k_max) {
  ProblemConfig pc = default_config(pid);
  pc.count = count;
  pc.seed = seed;
  if (k_min >= 0) pc.k_min = k_min;
  if (k_max >= 0) pc.k_max = k_max;
  return generate_problem(pc);
}

}  // namespace

// Derives the per-architecture model shape from the dataset a model will see.
ModelSpec model_spec_for(const ExperimentConfig& cfg, const std::string& arch,
                         const GeneratedSet& set) {
  ModelSpec s;
  s.arch = architecture_from_name(arch);
  const CoeffSeries& in0 = set.inputs.front();
  const CoeffSeries& t0 = set.targets.front();
  s.dim = t0.rank();
  if (!cfg.activation.empty()) s.act = activation_from_name(cfg.activation);

  AxisBasis model_axis = model_axis0(s);
  std::size_t mx = std::max(in0.shape[0], t0.shape[0]);
  bool same_basis = (t0.axes[0] == model_axis) ||
                    (t0.axes[0].kind == model_axis.kind && t0.axes[0].kind == BasisKind::Fourier);
  std::size_t size0 = same_basis ? clamp_size(mx, 9, 33) : clamp_size(2 * mx + 1, 9, 33);
  s.size0 = cfg.size0 ? cfg.size0 : size0;
  if (s.dim == 2) s.size1 = cfg.size1 ? cfg.size1 : clamp_size(t0.shape[1], 5, 17);
  if (cfg.features) s.features = cfg.features;
  if (cfg.n2_layers) s.n2_layers = cfg.n2_layers;

  s.fno_grid = cfg.fno_grid ? cfg.fno_grid : 64;
  s.fno_width = cfg.fno_width ? cfg.fno_width : 32;
  s.fno_modes = cfg.fno_modes ? cfg.fno_modes : std::min<std::size_t>(16, (s.fno_grid - 1) / 2);

  s.don_cheb = t0.axes[0].kind == BasisKind::Chebyshev;
  if (s.dim == 2) s.don_queries1 = 17;
  return s;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ResultRecord make_row(const std::string& experiment, const std::string& model,
                      const std::string& problem, const std::string& param,
                      const std::string& metric, double value, double seconds) {
  return ResultRecord{experiment, model, problem, param, metric, value, seconds};
}

// Closed-form spectral rule for problems that have one.
std::optional<CoeffSeries> oracle_apply(const std::string& pid, const CoeffSeries& input,
                                        const nlohmann::ordered_json& manifest) {
  if (pid == "identity") return input;
  if (pid.rfind("derivative", 0) == 0) return target_derivative(input);
  if (pid == "integrate") return target_integrate(input);
  if (pid == "shift_product") return target_shift_product(input);
  if (pid == "ode") {
    std::size_t band = manifest.contains("solver") && manifest["solver"].contains("target_band")
                           ? manifest["solver"]["target_band"].get<std::size_t>()
                           : 0;
    return parametric_ode_solution(input, band);
  }
  return std::nullopt;
}

// Mean relative L2 between two series lists on the uniform evaluation grid.
double series_error(const std::vector<CoeffSeries>& pred, const std::vector<CoeffSeries>& ref,
                    std::size_t m0, std::size_t m1) {
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::vector<cplx> a = (pred[i].rank() == 2) ? values_on_uniform_2d(pred[i], m0, m1)
                                                : values_on_uniform(pred[i], m0);
    std::vector<cplx> b = (ref[i].rank() == 2) ? values_on_uniform_2d(ref[i], m0, m1)
                                               : values_on_uniform(ref[i], m0);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      num += std::norm(a[j] - b[j]);
      den += std::norm(b[j]);
    }
    if (den == 0.0) throw std::runtime_error("series_error: zero reference");
    total += std::sqrt(num / den);
  }
  return total / static_cast<double>(pred.size());
}

std::optional<double> oracle_error(const std::string& pid, const GeneratedSet& set, std::size_t m0,
                                   std::size_t m1) {
  std::vector<CoeffSeries> pred;
  for (const auto& in : set.inputs) {
    auto p = oracle_apply(pid, in, set.manifest);
    if (!p) return std::nullopt;
    pred.push_back(std::move(*p));
  }
  return series_error(pred, set.targets, m0, m1);
}

struct TrainedModel {
  ModelSpec spec;
  Params params;
  double final_train_loss = 0.0;
};

TrainedModel train_on(const ExperimentConfig& cfg, const std::string& arch, const ModelSpec& spec,
                      const GeneratedSet& train, const GeneratedSet* test, const std::string& pid,
                      std::uint64_t init_index) {
  TrainedModel tm;
  tm.spec = spec;
  tm.params = init_params(spec, rng::derive(cfg.seed, "init:" + arch + ":" + pid, init_index));
  Dataset dtrain{pack_inputs(spec, train.inputs), pack_targets(spec, train.targets)};
  Dataset dtest;
  if (test) dtest = Dataset{pack_inputs(spec, test->inputs), pack_targets(spec, test->targets)};
  TrainConfig tc = cfg.train;
  tc.seed = rng::derive(cfg.seed, "shuffle:" + arch + ":" + pid, init_index);
  TrainHistory h = train_loop(spec, tm.params, dtrain, test ? &dtest : nullptr, tc);
  tm.final_train_loss = h.train_loss.empty() ? 0.0 : h.train_loss.back();
  return tm;
}

std::vector<std::string> or_default(const std::vector<std::string>& v,
                                    std::vector<std::string> def) {
  return v.empty() ? def : v;
}

std::size_t dim2_eval_grid(const ExperimentConfig& cfg, const GeneratedSet& set) {
  if (set.targets.front().rank() != 2) return 0;
  return cfg.eval_grid1 ? cfg.eval_grid1 : 33;
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<ResultRecord> run_benchmark(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> rows;
  std::vector<std::string> problems = or_default(cfg.problems, {"derivative_10"});
  std::vector<std::string> models = or_default(cfg.models, {"oracle", "sno_f"});
  for (const std::string& pid : problems) {
    GeneratedSet train = make_set(pid, cfg.count, rng::derive(cfg.seed, "data:" + pid, 0),
                                  cfg.k_min, cfg.k_max);
    GeneratedSet test = make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1),
                                 cfg.k_min, cfg.k_max);
    std::size_t m1 = dim2_eval_grid(cfg, test);
    for (const std::string& arch : models) {
      Timer timer;
      if (arch == "oracle") {
        auto e = oracle_error(pid, test, cfg.eval_grid, m1);
        if (e) rows.push_back(make_row("benchmark", arch, pid, "-", "rel_l2", *e, timer.seconds()));
        continue;
      }
      try {
        ModelSpec spec = model_spec_for(cfg, arch, test);
        TrainedModel tm = train_on(cfg, arch, spec, train, &test, pid, 0);
        double err = evaluate_on_uniform(spec, tm.params, test.inputs, test.targets, cfg.eval_grid, m1);
        double secs = timer.seconds();
        rows.push_back(make_row("benchmark", arch, pid, "-", "rel_l2", err, secs));
        rows.push_back(make_row("benchmark", arch, pid, "-", "train_loss", tm.final_train_loss, secs));
      } catch (const std::exception&) {
        // divergence / unsupported combination: sentinel row, not a crash
        rows.push_back(make_row("benchmark", arch, pid, "-", "rel_l2", kNaN, timer.seconds()));
      }
    }
  }
  return rows;
}

std::vector<ResultRecord> run_superres(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> rows;
  std::vector<std::string> problems = or_default(cfg.problems, {"derivative_10"});
  std::vector<std::string> models = or_default(cfg.models, {"oracle", "sno_f", "fno"});
  std::vector<long> dks = cfg.dk.empty() ? std::vector<long>{0, 2, 5, 8, 10} : cfg.dk;
  for (const std::string& pid : problems) {
    ProblemConfig defaults = default_config(pid);
    long k_min = cfg.k_min >= 0 ? cfg.k_min : defaults.k_min;
    long k_max = cfg.k_max >= 0 ? cfg.k_max : defaults.k_max;
    require(cfg.train_grid >= 2 * static_cast<std::size_t>(k_max) + 1,
            "superres: train grid below the 2K+1 sampling rule");
    for (long dk : dks) {
      require(dk >= 0, "superres: shifts must be non-negative");
      require(cfg.eval_grid >= 2 * static_cast<std::size_t>(k_max + dk) + 1,
              "superres: eval grid below the 2 max|k|+1 sampling rule");
    }
    GeneratedSet train = make_set(pid, cfg.count, rng::derive(cfg.seed, "data:" + pid, 0), k_min, k_max);
    GeneratedSet test = make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1), k_min, k_max);

    std::vector<std::pair<std::string, TrainedModel>> trained;
    for (const std::string& arch : models) {
      if (arch == "oracle") continue;
      ModelSpec spec = model_spec_for(cfg, arch, test);
      // One shared training resolution: coefficient models carry the
      // harmonics the training grid resolves, grid models run on that grid.
      switch (spec.arch) {
        case Architecture::SNO_Ch:
        case Architecture::SNO_F:
        case Architecture::xSNO_Ch:
        case Architecture::xSNO_F:
        case Architecture::xcSNO_Ch:
        case Architecture::xcSNO_F:
          if (!cfg.size0) spec.size0 = (cfg.train_grid + 1) / 2;
          break;
        case Architecture::FNO:
          if (!cfg.fno_grid) {
            spec.fno_grid = cfg.train_grid;
            spec.fno_modes = cfg.fno_modes ? cfg.fno_modes
                                           : std::min<std::size_t>(16, (spec.fno_grid - 1) / 2);
          }
          break;
        case Architecture::DeepONet:
          break;
      }
      trained.emplace_back(arch, train_on(cfg, arch, spec, train, &test, pid, 0));
    }

    for (long dk : dks) {
      GeneratedSet eval = (dk == 0)
                              ? make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1),
                                         k_min, k_max)
                              : make_set(pid, cfg.test_count,
                                         rng::derive(cfg.seed, "shift:" + pid,
                                                     static_cast<std::uint64_t>(dk)),
                                         k_min + dk, k_max + dk);
      std::string param = std::to_string(dk);
      for (const std::string& arch : models) {
        Timer timer;
        if (arch == "oracle") {
          auto e = oracle_error(pid, eval, cfg.eval_grid, 0);
          if (e) rows.push_back(make_row("superres", arch, pid, param, "rel_l2", *e, timer.seconds()));
          continue;
        }
        for (auto& [name, tm] : trained) {
          if (name != arch) continue;
          double err = evaluate_on_uniform(tm.spec, tm.params, eval.inputs, eval.targets,
                                           cfg.eval_grid, 0);
          rows.push_back(make_row("superres", arch, pid, param, "rel_l2", err, timer.seconds()));
        }
      }
    }
  }
  return rows;
}

std::vector<ResultRecord> run_lowfreq(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> rows;
  std::vector<std::string> problems = or_default(cfg.problems, {"integrate"});
  std::vector<std::string> models = or_default(cfg.models, {"oracle", "sno_f"});
  std::vector<long> dks = cfg.dk.empty() ? std::vector<long>{0, 4, 8, 11, 14} : cfg.dk;
  for (const std::string& pid : problems) {
    long k_min = cfg.k_min >= 0 ? cfg.k_min : 15;
    long k_max = cfg.k_max >= 0 ? cfg.k_max : 25;
    for (long dk : dks) {
      require(dk >= 0 && k_min - dk >= 1, "lowfreq: down-shift must keep k_min >= 1");
    }
    GeneratedSet train = make_set(pid, cfg.count, rng::derive(cfg.seed, "data:" + pid, 0), k_min, k_max);
    GeneratedSet test = make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1), k_min, k_max);

    std::vector<std::pair<std::string, TrainedModel>> trained;
    for (const std::string& arch : models) {
      if (arch == "oracle") continue;
      ModelSpec spec = model_spec_for(cfg, arch, test);
      trained.emplace_back(arch, train_on(cfg, arch, spec, train, &test, pid, 0));
    }
    for (long dk : dks) {
      GeneratedSet eval = (dk == 0)
                              ? make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1),
                                         k_min, k_max)
                              : make_set(pid, cfg.test_count,
                                         rng::derive(cfg.seed, "downshift:" + pid,
                                                     static_cast<std::uint64_t>(dk)),
                                         k_min - dk, k_max - dk);
      std::string param = std::to_string(dk);
      for (const std::string& arch : models) {
        Timer timer;
        if (arch == "oracle") {
          auto e = oracle_error(pid, eval, cfg.eval_grid, 0);
          if (e) rows.push_back(make_row("lowfreq", arch, pid, param, "rel_l2", *e, timer.seconds()));
          continue;
        }
        for (auto& [name, tm] : trained) {
          if (name != arch) continue;
          double err = evaluate_on_uniform(tm.spec, tm.params, eval.inputs, eval.targets,
                                           cfg.eval_grid, 0);
          rows.push_back(make_row("lowfreq", arch, pid, param, "rel_l2", err, timer.seconds()));
        }
      }
    }
  }
  return rows;
}

namespace {

// FNO forward on an arbitrary even grid: the weights are per-mode and
// pointwise, so only the spec's grid field changes.
GridFunction fno_grid_op(const ModelSpec& spec, const Params& params, const GridFunction& g) {
  std::size_t m = g.shape[0];
  ModelSpec es = spec;
  es.fno_grid = m;
  ad::Tensor in = ad::Tensor::zeros(1, m, 2);
  std::vector<double> xs = uniform_points(m);
  for (std::size_t i = 0; i < m; ++i) {
    in.m(static_cast<Eigen::Index>(i), 0) = cplx(g.values[i].real(), 0.0);
    in.m(static_cast<Eigen::Index>(i), 1) = cplx(xs[i], 0.0);
  }
  ad::Tape tape;
  BuiltModel built = model_forward(tape, es, params, in);
  const ad::Tensor& out = tape.value(built.output);
  GridFunction r = GridFunction::zeros({GridKind::Uniform}, {m});
  for (std::size_t i = 0; i < m; ++i) r.values[i] = cplx(out.m(static_cast<Eigen::Index>(i), 0).real(), 0.0);
  return r;
}

// Series-interface forward: analyze the grid, run the model on coefficients
// (or sensor values), synthesize back on the same grid.
GridFunction series_grid_op(const ModelSpec& spec, const Params& params, const GridFunction& g) {
  std::size_t m = g.shape[0];
  CoeffSeries s = fourier_analysis(g, true);
  ad::Tensor in = pack_inputs(spec, {s});
  ad::Tape tape;
  BuiltModel built = model_forward(tape, spec, params, in);
  CoeffSeries out = output_series(spec, tape.value(built.output), 0);
  std::vector<cplx> vals = values_on_uniform(out, m);
  GridFunction r = GridFunction::zeros({GridKind::Uniform}, {m});
  for (std::size_t i = 0; i < m; ++i) r.values[i] = cplx(vals[i].real(), 0.0);
  return r;
}

std::vector<GridFunction> fine_grids(const GeneratedSet& set, std::size_t m) {
  std::vector<GridFunction> out;
  for (const auto& s : set.inputs) {
    GridFunction g = fourier_synthesis(s, m);
    for (auto& v : g.values) v = cplx(v.real(), 0.0);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<ResultRecord> run_aliasing_study(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> rows;
  std::string pid = cfg.problems.empty() ? "derivative_10" : cfg.problems.front();
  std::vector<std::size_t> grids = cfg.grids.empty() ? std::vector<std::size_t>{24, 48, 96} : cfg.grids;
  ProblemConfig defaults = default_config(pid);
  long k_max = cfg.k_max >= 0 ? cfg.k_max : defaults.k_max;
  for (std::size_t g : grids)
    require(g % 2 == 0 && g >= 2 * static_cast<std::size_t>(k_max) + 2,
            "aliasing: grids must be even and resolve the input band");

  GeneratedSet train = make_set(pid, cfg.count, rng::derive(cfg.seed, "data:" + pid, 0), cfg.k_min, k_max);
  GeneratedSet test = make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1), cfg.k_min, k_max);

  ModelSpec smallest_spec;
  Params smallest_params;
  for (std::size_t gi = 0; gi < grids.size(); ++gi) {
    std::size_t G = grids[gi];
    Timer timer;
    ModelSpec spec = model_spec_for(cfg, "fno", test);
    spec.fno_grid = G;
    spec.fno_modes = cfg.fno_modes ? cfg.fno_modes : static_cast<std::size_t>(k_max);
    TrainedModel tm = train_on(cfg, "fno", spec, train, &test, pid, gi);
    std::string param = std::to_string(G);
    double err = evaluate_on_uniform(spec, tm.params, test.inputs, test.targets, cfg.eval_grid, 0);
    rows.push_back(make_row("aliasing", "fno", pid, param, "rel_l2", err, timer.seconds()));

    std::vector<GridFunction> fine = fine_grids(test, 2 * G);
    DiscrepancyReport rep = operator_grid_discrepancy(
        [&](const GridFunction& g) { return fno_grid_op(spec, tm.params, g); }, fine);
    double secs = timer.seconds();
    rows.push_back(make_row("aliasing", "fno", pid, param, "discrepancy_mean", rep.mean, secs));
    rows.push_back(make_row("aliasing", "fno", pid, param, "discrepancy_median", rep.median, secs));
    rows.push_back(make_row("aliasing", "fno", pid, param, "discrepancy_max", rep.max, secs));
    if (gi == 0) {
      smallest_spec = spec;
      smallest_params = tm.params;
    }
  }

  // Coarsest-grid model fed with inputs sampled on finer grids.
  for (std::size_t m : {grids.front(), 2 * grids.front(), 4 * grids.front()}) {
    Timer timer;
    ModelSpec es = smallest_spec;
    es.fno_grid = m;
    double err = evaluate_on_uniform(es, smallest_params, test.inputs, test.targets, cfg.eval_grid, 0);
    rows.push_back(
        make_row("aliasing", "fno", pid, std::to_string(m), "transfer_rel_l2", err, timer.seconds()));
  }

  // Series-interface and fixed-sensor baselines: the discrepancy is a property
  // of the input interface, so freshly initialized networks suffice.
  for (const std::string& arch : {std::string("sno_f"), std::string("deeponet")}) {
    if (!cfg.models.empty() &&
        std::find(cfg.models.begin(), cfg.models.end(), arch) == cfg.models.end())
      continue;
    ModelSpec spec = model_spec_for(cfg, arch, test);
    Params params = init_params(spec, rng::derive(cfg.seed, "init:" + arch + ":" + pid, 0));
    for (std::size_t G : grids) {
      Timer timer;
      std::vector<GridFunction> fine = fine_grids(test, 2 * G);
      DiscrepancyReport rep = operator_grid_discrepancy(
          [&](const GridFunction& g) { return series_grid_op(spec, params, g); }, fine);
      rows.push_back(make_row("aliasing", arch, pid, std::to_string(G), "discrepancy_mean", rep.mean,
                              timer.seconds()));
    }
  }
  return rows;
}

std::vector<ResultRecord> run_init_sensitivity(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> rows;
  std::vector<std::string> problems = or_default(cfg.problems, {"identity"});
  std::vector<std::string> models = or_default(cfg.models, {"sno_f"});
  std::vector<std::uint64_t> seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3, 4, 5}
                                                       : cfg.seeds;
  for (const std::string& pid : problems) {
    GeneratedSet train = make_set(pid, cfg.count, rng::derive(cfg.seed, "data:" + pid, 0),
                                  cfg.k_min, cfg.k_max);
    GeneratedSet test = make_set(pid, cfg.test_count, rng::derive(cfg.seed, "data:" + pid, 1),
                                 cfg.k_min, cfg.k_max);
    std::size_t m1 = dim2_eval_grid(cfg, test);
    for (const std::string& arch : models) {
      if (arch == "oracle") continue;
      std::vector<double> errors;
      for (std::uint64_t s : seeds) {
        Timer timer;
        ModelSpec spec = model_spec_for(cfg, arch, test);
        Params params = init_params(spec, s);
        Dataset dtrain{pack_inputs(spec, train.inputs), pack_targets(spec, train.targets)};
        TrainConfig tc = cfg.train;
        tc.seed = rng::derive(s, "shuffle");
        train_loop(spec, params, dtrain, nullptr, tc);
        double err = evaluate_on_uniform(spec, params, test.inputs, test.targets, cfg.eval_grid, m1);
        errors.push_back(err);
        rows.push_back(make_row("init", arch, pid, std::to_string(s), "rel_l2", err, timer.seconds()));
      }
      double mean = 0.0;
      for (double e : errors) mean += e;
      mean /= static_cast<double>(errors.size());
      double var = 0.0;
      for (double e : errors) var += (e - mean) * (e - mean);
      var /= static_cast<double>(errors.size()); // population variance
      double sd = std::sqrt(var);
      rows.push_back(make_row("init", arch, pid, "-", "mean", mean, 0.0));
      rows.push_back(make_row("init", arch, pid, "-", "std", sd, 0.0));
      rows.push_back(make_row("init", arch, pid, "-", "skewed_right", (mean - sd < 0.0) ? 1.0 : 0.0, 0.0));
    }
  }
  return rows;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  const std::string& k = cfg.kind;
  if (k == "benchmark") return run_benchmark(cfg);
  if (k == "superres" || k == "super-res") return run_superres(cfg);
  if (k == "lowfreq" || k == "low-freq") return run_lowfreq(cfg);
  if (k == "aliasing" || k == "aliasing_study") return run_aliasing_study(cfg);
  if (k == "init" || k == "init_sensitivity") return run_init_sensitivity(cfg);
  throw std::invalid_argument("unknown experiment kind: " + k);
}

std::string results_csv(const std::vector<ResultRecord>& rows, bool deterministic_output) {
  std::ostringstream os;
  os << "experiment,model,problem,param,metric,value,seconds\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.model << ',' << r.problem << ',' << r.param << ',' << r.metric
       << ',' << fmt_double(r.value) << ',';
    if (deterministic_output) {
      os << '0';
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRecord>& rows,
                       bool deterministic_output) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << results_csv(rows, deterministic_output);
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("config: expected a boolean, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    bool known = true;
    try {
      if (key == "kind") cfg.kind = value;
      else if (key == "models") cfg.models = split_csv(value);
      else if (key == "problems") cfg.problems = split_csv(value);
      else if (key == "lr") cfg.train.lr = std::stod(value);
      else if (key == "decay") cfg.train.decay = std::stod(value);
      else if (key == "decay_interval") cfg.train.decay_interval = std::stoul(value);
      else if (key == "epochs") cfg.train.epochs = std::stoul(value);
      else if (key == "batch") cfg.train.batch = std::stoul(value);
      else if (key == "log_interval") cfg.train.log_interval = std::stoul(value);
      else if (key == "count") cfg.count = std::stoul(value);
      else if (key == "test_count") cfg.test_count = std::stoul(value);
      else if (key == "k_min") cfg.k_min = std::stol(value);
      else if (key == "k_max") cfg.k_max = std::stol(value);
      else if (key == "dk") { cfg.dk.clear(); for (auto& t : split_csv(value)) cfg.dk.push_back(std::stol(t)); }
      else if (key == "grids") { cfg.grids.clear(); for (auto& t : split_csv(value)) cfg.grids.push_back(std::stoul(t)); }
      else if (key == "train_grid") cfg.train_grid = std::stoul(value);
      else if (key == "eval_grid") cfg.eval_grid = std::stoul(value);
      else if (key == "eval_grid1") cfg.eval_grid1 = std::stoul(value);
      else if (key == "seeds") { cfg.seeds.clear(); for (auto& t : split_csv(value)) cfg.seeds.push_back(std::stoull(t)); }
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "out") cfg.out = value;
      else if (key == "deterministic_output") cfg.deterministic_output = parse_bool(value);
      else if (key == "size0") cfg.size0 = std::stoul(value);
      else if (key == "size1") cfg.size1 = std::stoul(value);
      else if (key == "features") cfg.features = std::stoul(value);
      else if (key == "n2_layers") cfg.n2_layers = std::stoul(value);
      else if (key == "fno_width") cfg.fno_width = std::stoul(value);
      else if (key == "fno_modes") cfg.fno_modes = std::stoul(value);
      else if (key == "fno_grid") cfg.fno_grid = std::stoul(value);
      else if (key == "activation") cfg.activation = value;
      else known = false;
    } catch (const std::exception&) {
      // stod/stoul failures surface here; report them with their line
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
    if (!known) throw std::invalid_argument("unknown config key: " + key);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config_text(os.str());
}

}  // namespace sno
