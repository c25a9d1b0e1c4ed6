// Command line front end: dataset generation, single-model training and
// evaluation, experiment protocols, and aliasing-error reports.

#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sno/aliasing.hpp"
#include "sno/experiments.hpp"
#include "sno/problems.hpp"
#include "sno/rng.hpp"
#include "sno/training.hpp"

namespace {

std::pair<long, long> parse_band(const std::string& band) {
  auto colon = band.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--band", "expected k_min:k_max");
  try {
    return {std::stol(band.substr(0, colon)), std::stol(band.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--band", "expected integers k_min:k_max");
  }
}

int cmd_gen_data(const std::string& problem, const std::string& out, std::uint64_t seed,
                 std::size_t count, const std::string& band) {
  sno::ProblemConfig pc = sno::default_config(problem);
  pc.seed = seed;
  if (count) pc.count = count;
  if (!band.empty()) {
    auto [lo, hi] = parse_band(band);
    pc.k_min = lo;
    pc.k_max = hi;
  }
  sno::GeneratedSet set = sno::generate_problem(pc);
  std::string dir = out.empty() ? "data/" + problem : out;
  sno::write_dataset(dir, set);
  std::cout << "wrote " << set.inputs.size() << " samples to " << dir << "\n";
  return 0;
}

int cmd_train(const std::string& model, const std::string& problem, const std::string& config,
              const std::string& out) {
  sno::ExperimentConfig cfg =
      config.empty() ? sno::ExperimentConfig{} : sno::parse_config_file(config);
  sno::GeneratedSet train = [&] {
    sno::ProblemConfig pc = sno::default_config(problem);
    pc.count = cfg.count;
    pc.seed = sno::rng::derive(cfg.seed, "data:" + problem, 0);
    if (cfg.k_min >= 0) pc.k_min = cfg.k_min;
    if (cfg.k_max >= 0) pc.k_max = cfg.k_max;
    return sno::generate_problem(pc);
  }();
  sno::GeneratedSet test = [&] {
    sno::ProblemConfig pc = sno::default_config(problem);
    pc.count = cfg.test_count;
    pc.seed = sno::rng::derive(cfg.seed, "data:" + problem, 1);
    if (cfg.k_min >= 0) pc.k_min = cfg.k_min;
    if (cfg.k_max >= 0) pc.k_max = cfg.k_max;
    return sno::generate_problem(pc);
  }();

  sno::ModelSpec spec = sno::model_spec_for(cfg, model, test);
  sno::Params params =
      sno::init_params(spec, sno::rng::derive(cfg.seed, "init:" + model + ":" + problem, 0));
  sno::Dataset dtrain{sno::pack_inputs(spec, train.inputs), sno::pack_targets(spec, train.targets)};
  sno::Dataset dtest{sno::pack_inputs(spec, test.inputs), sno::pack_targets(spec, test.targets)};
  sno::TrainConfig tc = cfg.train;
  tc.seed = sno::rng::derive(cfg.seed, "shuffle:" + model + ":" + problem, 0);
  sno::TrainHistory h = sno::train_loop(spec, params, dtrain, &dtest, tc);

  std::size_t m1 = test.targets.front().rank() == 2 ? (cfg.eval_grid1 ? cfg.eval_grid1 : 33) : 0;
  double err =
      sno::evaluate_on_uniform(spec, params, test.inputs, test.targets, cfg.eval_grid, m1);
  std::string path = out.empty() ? model + "_" + problem + ".sno" : out;
  sno::save_model(path, spec, params, tc, tc.epochs);
  std::printf("final train loss %.6g, uniform-grid test error %.6g\n",
              h.train_loss.empty() ? 0.0 : h.train_loss.back(), err);
  std::cout << "saved checkpoint to " << path << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& dataset, std::size_t grid,
             std::size_t grid1) {
  sno::LoadedModel lm = sno::load_model(checkpoint);
  sno::GeneratedSet set = sno::read_dataset(dataset);
  std::size_t m1 = set.targets.front().rank() == 2 ? (grid1 ? grid1 : 33) : 0;
  double err = sno::evaluate_on_uniform(lm.spec, lm.params, set.inputs, set.targets, grid, m1);
  std::printf("checkpoint,dataset,samples,rel_l2\n%s,%s,%zu,%.17g\n", checkpoint.c_str(),
              dataset.c_str(), set.inputs.size(), err);
  return 0;
}

int cmd_experiment(const std::string& kind, const std::string& config, const std::string& out,
                   bool seed_given, std::uint64_t seed) {
  sno::ExperimentConfig cfg =
      config.empty() ? sno::ExperimentConfig{} : sno::parse_config_file(config);
  cfg.kind = kind;
  if (!out.empty()) cfg.out = out;
  if (seed_given) cfg.seed = seed;
  std::vector<sno::ResultRecord> rows = sno::run_experiment(cfg);
  sno::write_results_csv(cfg.out, rows, cfg.deterministic_output);
  std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
  return 0;
}

// Aliasing-error table for the two band-extreme inputs: the top Chebyshev
// polynomial T_N and the top Fourier harmonic cos(pi N x). k indexes the
// refined tail cut at k*N (k = 1 is the plain aliasing error).
int cmd_aliasing(const std::string& activation, std::size_t band, std::size_t oversample) {
  sno::Activation act = sno::activation_from_name(activation);
  sno::CoeffSeries cheb =
      sno::CoeffSeries::zeros({{sno::BasisKind::Chebyshev, true}}, {band + 1});
  cheb.coeffs[band] = 1.0;
  sno::CoeffSeries four = sno::CoeffSeries::zeros({{sno::BasisKind::Fourier, true}}, {band + 1});
  four.coeffs[band] = 0.5; // packed axis: cos(pi N x) stores half at +N

  std::printf("input_id,N,k,E_a,tail_norm,total_norm,warning_flag\n");
  auto emit = [&](const std::string& id, const sno::CoeffSeries& f) {
    for (std::size_t k = 1; k <= 4; ++k) {
      sno::AliasingReport r = sno::aliasing_error_refined(f, act, band, k, oversample);
      std::printf("%s,%zu,%zu,%.17g,%.17g,%.17g,%d\n", id.c_str(), band, k, r.value, r.tail_norm,
                  r.total_norm, r.undersampled ? 1 : 0);
    }
  };
  emit("cheb_extreme", cheb);
  emit("fourier_extreme", four);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral operator learning toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  auto* gen = app.add_subcommand("gen-data", "generate a benchmark problem dataset");
  std::string gen_problem, gen_out, gen_band;
  std::uint64_t gen_seed = 0;
  std::size_t gen_count = 0;
  gen->add_option("problem", gen_problem, "problem id (see README)")->required();
  gen->add_option("--out", gen_out, "output directory (default data/<problem>)");
  gen->add_option("--seed", gen_seed, "dataset seed");
  gen->add_option("--count", gen_count, "number of samples (default per problem)");
  gen->add_option("--band", gen_band, "harmonic band k_min:k_max for random-family problems");
  gen->callback([&] { rc = cmd_gen_data(gen_problem, gen_out, gen_seed, gen_count, gen_band); });

  auto* train = app.add_subcommand("train", "train one model on one problem");
  std::string train_model, train_problem, train_config, train_out;
  train->add_option("--model", train_model, "architecture name")->required();
  train->add_option("--problem", train_problem, "problem id")->required();
  train->add_option("--config", train_config, "key=value config file");
  train->add_option("--out", train_out, "checkpoint path (default <model>_<problem>.sno)");
  train->callback([&] { rc = cmd_train(train_model, train_problem, train_config, train_out); });

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  std::string eval_ckpt, eval_data;
  std::size_t eval_grid = 99, eval_grid1 = 0;
  eval->add_option("--checkpoint", eval_ckpt, "model checkpoint (.sno)")->required();
  eval->add_option("--dataset", eval_data, "dataset directory")->required();
  eval->add_option("--grid", eval_grid, "uniform evaluation grid (default 99)");
  eval->add_option("--grid1", eval_grid1, "second-axis grid for 2D targets");
  eval->callback([&] { rc = cmd_eval(eval_ckpt, eval_data, eval_grid, eval_grid1); });

  auto* exp = app.add_subcommand("experiment", "run an experiment protocol");
  std::string exp_kind, exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  exp->add_option("kind", exp_kind, "benchmark | superres | lowfreq | aliasing | init")
      ->required();
  exp->add_option("--config", exp_config, "key=value config file");
  exp->add_option("--out", exp_out, "results CSV path (overrides config)");
  auto* seed_opt = exp->add_option("--seed", exp_seed, "experiment seed (overrides config)");
  exp->callback([&] {
    rc = cmd_experiment(exp_kind, exp_config, exp_out, seed_opt->count() > 0, exp_seed);
  });

  auto* alias = app.add_subcommand("aliasing", "aliasing error of an activation at a band");
  std::string alias_act = "relu";
  std::size_t alias_band = 8, alias_over = 32;
  alias->add_option("--activation", alias_act, "relu | softplus | tanh | identity | square");
  alias->add_option("--band", alias_band, "band limit N (default 8)");
  alias->add_option("--oversample", alias_over, "composition oversampling factor (default 32)");
  alias->callback([&] { rc = cmd_aliasing(alias_act, alias_band, alias_over); });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
