#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sno/experiments.hpp"
#include "sno/models.hpp"
#include "sno/problems.hpp"
#include "sno/series.hpp"

using namespace sno;
namespace fs = std::filesystem;

namespace {

const AxisBasis kFou{BasisKind::Fourier, true};
const AxisBasis kCheb{BasisKind::Chebyshev, true};

// Minimal dataset stub: model_spec_for only looks at the first input/target.
GeneratedSet stub_set(const AxisBasis& ax, std::size_t n_in, std::size_t n_tg) {
  GeneratedSet s;
  CoeffSeries in = CoeffSeries::zeros({ax}, {n_in});
  in.coeffs[0] = 1.0;
  CoeffSeries tg = CoeffSeries::zeros({ax}, {n_tg});
  tg.coeffs[0] = 1.0;
  s.inputs.push_back(in);
  s.targets.push_back(tg);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const ResultRecord* find_row(const std::vector<ResultRecord>& rows, const std::string& model,
                             const std::string& param, const std::string& metric) {
  for (const auto& r : rows)
    if (r.model == model && r.param == param && r.metric == metric) return &r;
  return nullptr;
}

}  // namespace

// ---- config parsing --------------------------------------------------------

TEST_CASE("config text parses every key") {
  ExperimentConfig cfg = parse_config_text(
      "# full keyword sweep\n"
      "kind = superres\n"
      "models = sno_f, fno\n"
      "problems=derivative_10,integrate\n"
      "lr = 0.005\n"
      "decay=0.25\n"
      "decay_interval = 300\n"
      "epochs = 1234\n"
      "batch = 16\n"
      "log_interval = 50\n"
      "count = 40   # trailing comment\n"
      "test_count = 30\n"
      "k_min = 2\n"
      "k_max = 12\n"
      "dk = 0, 2, 5\n"
      "grids = 24, 48\n"
      "train_grid = 41\n"
      "eval_grid = 101\n"
      "eval_grid1 = 21\n"
      "seeds = 7, 8\n"
      "seed = 99\n"
      "out = runs/out.csv\n"
      "deterministic_output = no\n"
      "size0 = 17\n"
      "size1 = 9\n"
      "features = 12\n"
      "n2_layers = 2\n"
      "fno_width = 24\n"
      "fno_modes = 10\n"
      "fno_grid = 48\n"
      "activation = tanh\n"
      "\n");
  CHECK(cfg.kind == "superres");
  CHECK(cfg.models == std::vector<std::string>{"sno_f", "fno"});
  CHECK(cfg.problems == std::vector<std::string>{"derivative_10", "integrate"});
  CHECK(cfg.train.lr == 0.005);
  CHECK(cfg.train.decay == 0.25);
  CHECK(cfg.train.decay_interval == 300);
  CHECK(cfg.train.epochs == 1234);
  CHECK(cfg.train.batch == 16);
  CHECK(cfg.train.log_interval == 50);
  CHECK(cfg.count == 40);
  CHECK(cfg.test_count == 30);
  CHECK(cfg.k_min == 2);
  CHECK(cfg.k_max == 12);
  CHECK(cfg.dk == std::vector<long>{0, 2, 5});
  CHECK(cfg.grids == std::vector<std::size_t>{24, 48});
  CHECK(cfg.train_grid == 41);
  CHECK(cfg.eval_grid == 101);
  CHECK(cfg.eval_grid1 == 21);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(cfg.seed == 99);
  CHECK(cfg.out == "runs/out.csv");
  CHECK(cfg.deterministic_output == false);
  CHECK(cfg.size0 == 17);
  CHECK(cfg.size1 == 9);
  CHECK(cfg.features == 12);
  CHECK(cfg.n2_layers == 2);
  CHECK(cfg.fno_width == 24);
  CHECK(cfg.fno_modes == 10);
  CHECK(cfg.fno_grid == 48);
  CHECK(cfg.activation == "tanh");

  // Untouched keys keep their defaults.
  ExperimentConfig d = parse_config_text("");
  CHECK(d.kind == "benchmark");
  CHECK(d.out == "results.csv");
  CHECK(d.deterministic_output);
  CHECK(d.train_grid == 33);
  CHECK(d.eval_grid == 99);
}

TEST_CASE("config errors name the line and the offending key") {
  CHECK_THROWS_WITH_AS(parse_config_text("kind = benchmark\nbogus_key = 3\n"),
                       "unknown config key: bogus_key", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("kind = benchmark\n\nlr = fast\n"),
                       "config line 3: bad value for lr", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("epochs ten\n"),
                       "config line 1: expected key=value", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("deterministic_output = maybe\n"),
                       "config line 1: bad value for deterministic_output", std::invalid_argument);
  CHECK(parse_config_text("deterministic_output = yes\n").deterministic_output);
  CHECK(parse_config_text("deterministic_output = 0\n").deterministic_output == false);
}

TEST_CASE("config files load, missing files are reported") {
  fs::path dir = fs::temp_directory_path() / "sno_experiments_test";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "a.cfg", std::ios::binary);
    out << "kind = lowfreq\nseed = 5\n";
  }
  ExperimentConfig cfg = parse_config_file(dir / "a.cfg");
  CHECK(cfg.kind == "lowfreq");
  CHECK(cfg.seed == 5);
  CHECK_THROWS_AS(parse_config_file(dir / "missing.cfg"), std::invalid_argument);
  fs::remove_all(dir);
}

// ---- result formatting -----------------------------------------------------

TEST_CASE("results csv pins header, value precision, and the seconds column") {
  std::vector<ResultRecord> rows;
  rows.push_back({"benchmark", "sno_f", "derivative_10", "-", "rel_l2", 1.0 / 3.0, 1.23456});
  rows.push_back({"superres", "oracle", "integrate", "5", "rel_l2",
                  std::numeric_limits<double>::quiet_NaN(), 0.5});

  std::string det = results_csv(rows, true);
  std::vector<std::string> ls = lines_of(det);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "experiment,model,problem,param,metric,value,seconds");
  CHECK(ls[1] == "benchmark,sno_f,derivative_10,-,rel_l2,0.33333333333333331,0");
  CHECK(ls[2] == "superres,oracle,integrate,5,rel_l2,nan,0");

  std::string timed = results_csv(rows, false);
  CHECK(lines_of(timed)[1] == "benchmark,sno_f,derivative_10,-,rel_l2,0.33333333333333331,1.235");

  // %.17g round-trips doubles exactly.
  double back = std::stod("0.33333333333333331");
  CHECK(back == 1.0 / 3.0);

  fs::path dir = fs::temp_directory_path() / "sno_experiments_test";
  fs::remove_all(dir);
  write_results_csv(dir / "deep" / "out.csv", rows, true);
  CHECK(slurp(dir / "deep" / "out.csv") == det);
  fs::remove_all(dir);
}

// ---- model spec derivation -------------------------------------------------

TEST_CASE("model specs track the data band with desk-scale clamps") {
  ExperimentConfig cfg;

  // Same basis (packed Fourier data, Fourier model): sizes follow the series.
  ModelSpec a = model_spec_for(cfg, "sno_f", stub_set(kFou, 11, 11));
  CHECK(a.arch == Architecture::SNO_F);
  CHECK(a.dim == 1);
  CHECK(a.size0 == 11);
  ModelSpec lo = model_spec_for(cfg, "sno_f", stub_set(kFou, 3, 3));
  CHECK(lo.size0 == 9);
  ModelSpec hi = model_spec_for(cfg, "sno_f", stub_set(kFou, 61, 41));
  CHECK(hi.size0 == 33);

  // Chebyshev data and Chebyshev model agree; a Fourier model re-expands the
  // band at 2 mx + 1 before clamping.
  GeneratedSet cheb = stub_set(kCheb, 10, 10);
  CHECK(model_spec_for(cfg, "sno_ch", cheb).size0 == 10);
  CHECK(model_spec_for(cfg, "sno_f", cheb).size0 == 21);
  CHECK(model_spec_for(cfg, "deeponet", cheb).don_cheb);
  CHECK(!model_spec_for(cfg, "deeponet", stub_set(kFou, 10, 10)).don_cheb);

  // FNO grid defaults and the derived mode cap.
  ModelSpec f = model_spec_for(cfg, "fno", stub_set(kFou, 11, 11));
  CHECK(f.fno_grid == 64);
  CHECK(f.fno_width == 32);
  CHECK(f.fno_modes == 16);
  ExperimentConfig small = cfg;
  small.fno_grid = 20;
  CHECK(model_spec_for(small, "fno", stub_set(kFou, 11, 11)).fno_modes == 9);

  // Explicit overrides always win.
  ExperimentConfig forced = cfg;
  forced.size0 = 17;
  forced.features = 7;
  forced.n2_layers = 2;
  forced.activation = "tanh";
  ModelSpec w = model_spec_for(forced, "sno_f", stub_set(kFou, 11, 11));
  CHECK(w.size0 == 17);
  CHECK(w.features == 7);
  CHECK(w.n2_layers == 2);
  CHECK(w.act == Activation::Tanh);

  // dim-2 targets set the second axis and the query grid.
  GeneratedSet two;
  two.inputs.push_back(CoeffSeries::zeros({kFou}, {9}));
  two.inputs.front().coeffs[0] = 1.0;
  two.targets.push_back(CoeffSeries::zeros({kFou, kCheb}, {9, 13}));
  two.targets.front().coeffs[0] = 1.0;
  ModelSpec t = model_spec_for(cfg, "sno_f", two);
  CHECK(t.dim == 2);
  CHECK(t.size1 == 13);
  ModelSpec td = model_spec_for(cfg, "deeponet", two);
  CHECK(td.don_queries1 == 17);

  CHECK_THROWS(model_spec_for(cfg, "not_an_arch", stub_set(kFou, 11, 11)));
}

// ---- experiment protocols (desk scale) -------------------------------------

TEST_CASE("superres enforces sampling rules and its oracle is exact") {
  ExperimentConfig cfg;
  cfg.kind = "superres";
  cfg.models = {"oracle"};
  cfg.problems = {"derivative_10"};
  cfg.count = 2;
  cfg.test_count = 3;
  cfg.dk = {0, 3};
  cfg.seed = 31;

  std::vector<ResultRecord> rows = run_superres(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.experiment == "superres");
    CHECK(r.model == "oracle");
    CHECK(r.metric == "rel_l2");
    CHECK(r.value < 1e-10);
  }
  CHECK(find_row(rows, "oracle", "0", "rel_l2"));
  CHECK(find_row(rows, "oracle", "3", "rel_l2"));

  // Train grid must resolve the training band, eval grid the shifted band.
  ExperimentConfig bad = cfg;
  bad.train_grid = 15;
  CHECK_THROWS_AS(run_superres(bad), std::invalid_argument);
  bad = cfg;
  bad.eval_grid = 25;  // 2 (10 + 3) + 1 = 27 needed
  CHECK_THROWS_AS(run_superres(bad), std::invalid_argument);
  bad = cfg;
  bad.dk = {-1};
  CHECK_THROWS_AS(run_superres(bad), std::invalid_argument);
}

TEST_CASE("lowfreq keeps shifted bands above zero and its oracle is exact") {
  ExperimentConfig cfg;
  cfg.kind = "lowfreq";
  cfg.models = {"oracle"};
  cfg.problems = {"integrate"};
  cfg.count = 2;
  cfg.test_count = 3;
  cfg.dk = {0, 8, 14};
  cfg.seed = 32;

  std::vector<ResultRecord> rows = run_lowfreq(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.value < 1e-10);
  CHECK(find_row(rows, "oracle", "14", "rel_l2"));

  ExperimentConfig bad = cfg;
  bad.dk = {15};  // k_min 15 - 15 = 0: the mean has no antiderivative
  CHECK_THROWS_AS(run_lowfreq(bad), std::invalid_argument);
}

TEST_CASE("benchmark trains listed models and flags failures as NaN rows") {
  ExperimentConfig cfg;
  cfg.kind = "benchmark";
  cfg.models = {"oracle", "sno_f", "not_an_arch"};
  cfg.problems = {"identity"};
  cfg.count = 6;
  cfg.test_count = 4;
  cfg.k_max = 4;
  cfg.seed = 33;
  cfg.size0 = 9;
  cfg.features = 6;
  cfg.n2_layers = 1;
  cfg.train.epochs = 40;
  cfg.train.lr = 1e-2;
  cfg.train.log_interval = 20;

  std::vector<ResultRecord> rows = run_benchmark(cfg);
  const ResultRecord* oracle = find_row(rows, "oracle", "-", "rel_l2");
  REQUIRE(oracle);
  CHECK(oracle->value == 0.0);  // identity rule reproduces the targets exactly

  const ResultRecord* model = find_row(rows, "sno_f", "-", "rel_l2");
  REQUIRE(model);
  CHECK(std::isfinite(model->value));
  CHECK(model->value < 2.0);
  const ResultRecord* loss = find_row(rows, "sno_f", "-", "train_loss");
  REQUIRE(loss);
  CHECK(std::isfinite(loss->value));

  const ResultRecord* bad = find_row(rows, "not_an_arch", "-", "rel_l2");
  REQUIRE(bad);
  CHECK(std::isnan(bad->value));
}

TEST_CASE("aliasing study: grid rows, transfer rows, series interfaces at roundoff") {
  ExperimentConfig cfg;
  cfg.kind = "aliasing";
  cfg.problems = {"derivative_10"};
  cfg.count = 3;
  cfg.test_count = 2;
  cfg.grids = {24, 48};
  cfg.seed = 34;
  cfg.fno_width = 8;
  cfg.train.epochs = 3;
  cfg.train.log_interval = 2;

  std::vector<ResultRecord> rows = run_aliasing_study(cfg);
  for (const std::size_t g : {24u, 48u}) {
    std::string param = std::to_string(g);
    CHECK(find_row(rows, "fno", param, "rel_l2"));
    const ResultRecord* mean = find_row(rows, "fno", param, "discrepancy_mean");
    const ResultRecord* med = find_row(rows, "fno", param, "discrepancy_median");
    const ResultRecord* mx = find_row(rows, "fno", param, "discrepancy_max");
    REQUIRE(mean);
    REQUIRE(med);
    REQUIRE(mx);
    CHECK(mean->value >= 0.0);
    CHECK(mx->value >= mean->value);
    CHECK(mx->value >= med->value);
    // The series-interface baselines see identical coefficients on every
    // sampling grid, so their discrepancy sits at roundoff.
    const ResultRecord* sno = find_row(rows, "sno_f", param, "discrepancy_mean");
    const ResultRecord* don = find_row(rows, "deeponet", param, "discrepancy_mean");
    REQUIRE(sno);
    REQUIRE(don);
    CHECK(sno->value < 1e-10);
    CHECK(don->value < 1e-10);
  }
  for (const std::size_t m : {24u, 48u, 96u})
    CHECK(find_row(rows, "fno", std::to_string(m), "transfer_rel_l2"));

  ExperimentConfig bad = cfg;
  bad.grids = {25};
  CHECK_THROWS_AS(run_aliasing_study(bad), std::invalid_argument);
  bad.grids = {20};  // below 2 k_max + 2
  CHECK_THROWS_AS(run_aliasing_study(bad), std::invalid_argument);
}

TEST_CASE("init sensitivity reports per-seed rows plus population stats") {
  ExperimentConfig cfg;
  cfg.kind = "init";
  cfg.models = {"sno_f"};
  cfg.problems = {"identity"};
  cfg.count = 4;
  cfg.test_count = 3;
  cfg.k_max = 4;
  cfg.seeds = {1, 2, 3};
  cfg.seed = 35;
  cfg.size0 = 9;
  cfg.features = 5;
  cfg.n2_layers = 1;
  cfg.train.epochs = 15;
  cfg.train.log_interval = 10;

  std::vector<ResultRecord> rows = run_init_sensitivity(cfg);
  std::vector<double> errs;
  for (std::uint64_t s : {1u, 2u, 3u}) {
    const ResultRecord* r = find_row(rows, "sno_f", std::to_string(s), "rel_l2");
    REQUIRE(r);
    errs.push_back(r->value);
  }
  CHECK(!(errs[0] == errs[1] && errs[1] == errs[2]));  // seeds actually differ
  double mean = (errs[0] + errs[1] + errs[2]) / 3.0;
  double var = 0.0;
  for (double e : errs) var += (e - mean) * (e - mean);
  double sd = std::sqrt(var / 3.0);
  const ResultRecord* rm = find_row(rows, "sno_f", "-", "mean");
  const ResultRecord* rs = find_row(rows, "sno_f", "-", "std");
  const ResultRecord* rk = find_row(rows, "sno_f", "-", "skewed_right");
  REQUIRE(rm);
  REQUIRE(rs);
  REQUIRE(rk);
  CHECK(rm->value == doctest::Approx(mean).epsilon(1e-12));
  CHECK(rs->value == doctest::Approx(sd).epsilon(1e-12));
  CHECK(rk->value == ((mean - sd < 0.0) ? 1.0 : 0.0));
}

TEST_CASE("experiment dispatch accepts kind aliases and rejects strangers") {
  ExperimentConfig cfg;
  cfg.models = {"oracle"};
  cfg.problems = {"integrate"};
  cfg.count = 2;
  cfg.test_count = 2;
  cfg.dk = {0};
  for (const char* kind : {"lowfreq", "low-freq"}) {
    cfg.kind = kind;
    std::vector<ResultRecord> rows = run_experiment(cfg);
    CHECK(rows.size() == 1);
    CHECK(rows[0].experiment == "lowfreq");
  }
  cfg.kind = "mystery";
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("identical configurations produce byte-identical result files") {
  ExperimentConfig cfg;
  cfg.kind = "superres";
  cfg.models = {"oracle"};
  cfg.problems = {"derivative_10"};
  cfg.count = 2;
  cfg.test_count = 2;
  cfg.dk = {0, 2};
  cfg.seed = 36;

  std::string a = results_csv(run_experiment(cfg), true);
  std::string b = results_csv(run_experiment(cfg), true);
  CHECK(a == b);

  fs::path dir = fs::temp_directory_path() / "sno_experiments_test";
  fs::remove_all(dir);
  write_results_csv(dir / "r1.csv", run_experiment(cfg), true);
  write_results_csv(dir / "r2.csv", run_experiment(cfg), true);
  CHECK(slurp(dir / "r1.csv") == slurp(dir / "r2.csv"));
  CHECK(slurp(dir / "r1.csv") == a);
  fs::remove_all(dir);
}
