#include "sno/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "sno/serialize.hpp"
#include "sno/solvers.hpp"
#include "sno/transforms.hpp"

namespace sno {

namespace {

using json = nlohmann::ordered_json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

CoeffSeries random_family_draw(std::size_t k_min, std::size_t k_max, double sigma,
                               rng::Stream& stream, std::vector<cplx>* raw) {
  require(k_min <= k_max, "random_family_draw: k_min <= k_max");
  require(sigma > 0.0, "random_family_draw: sigma > 0");
  std::vector<cplx> d(k_max - k_min + 1);
  double norm2 = 0.0;
  for (auto& v : d) {
    v = sigma * stream.normal_complex();
    norm2 += std::norm(v);
  }
  if (raw) *raw = d;
  double norm = std::sqrt(norm2);
  require(norm > 0.0, "random_family_draw: degenerate draw");
  // Real part of the normalized one-sided sum: the packed series stores
  // c_0 = Re(d_0), c_k = d_k / 2 (half of each Hermitian pair).
  CoeffSeries out = CoeffSeries::zeros({{BasisKind::Fourier, true}}, {k_max + 1});
  for (std::size_t k = k_min; k <= k_max; ++k) {
    cplx dk = d[k - k_min] / norm;
    out.coeffs[k] = (k == 0) ? cplx(dk.real(), 0.0) : dk / 2.0;
  }
  return out;
}

std::vector<CoeffSeries> sample_random_family(const RandomFamilyParams& p) {
  std::vector<CoeffSeries> out;
  out.reserve(p.count);
  for (std::size_t i = 0; i < p.count; ++i) {
    rng::Stream st(rng::derive(p.seed, "sample", i));
    out.push_back(random_family_draw(p.k_min, p.k_max, p.sigma, st));
  }
  return out;
}

CoeffSeries target_integrate(const CoeffSeries& f) { return integrate(f); }

CoeffSeries target_shift_product(const CoeffSeries& f) { return multiply(f, shift(f, 1.0)); }

CoeffSeries target_derivative(const CoeffSeries& f) { return differentiate(f); }

CoeffSeries parametric_ode_solution(const CoeffSeries& f, std::size_t target_band) {
  require(f.rank() == 1 && f.axes[0].kind == BasisKind::Fourier && f.axes[0].real_signal,
          "parametric_ode_solution: f must be a packed Fourier series");
  CoeffSeries F = integrate(f); // throws unless f has zero mean
  std::size_t K = F.shape[0] - 1;
  std::size_t m = 8 * K + 5; // odd, >= 4x the natural grid
  GridFunction g = fourier_synthesis(F, m);
  GridFunction h = GridFunction::zeros({GridKind::Uniform}, {m});
  for (std::size_t j = 0; j < m; ++j) h.values[j] = std::exp(g.values[j].real());
  CoeffSeries y = fourier_analysis(h, true);
  if (target_band > 0 && target_band + 1 < y.shape[0]) y = chop(y, target_band + 1);
  return y;
}

namespace {

// ---- D=2 assembly -------------------------------------------------------

// snaps[j] holds the 1-axis series at Chebyshev node j of the scaled time
// axis (descending, t = T (1 + xi)/2). Returns axes {axis0, Chebyshev}.
CoeffSeries cheb_in_time(const std::vector<CoeffSeries>& snaps) {
  std::size_t nt = snaps.size() - 1;
  require(nt >= 1, "cheb_in_time: need at least two time nodes");
  std::size_t n0 = snaps[0].shape[0];
  for (const auto& s : snaps)
    require(s.rank() == 1 && s.shape[0] == n0 && s.axes[0] == snaps[0].axes[0],
            "cheb_in_time: inconsistent snapshots");
  CoeffSeries out = CoeffSeries::zeros({snaps[0].axes[0], {BasisKind::Chebyshev}}, {n0, nt + 1});
  GridFunction row = GridFunction::zeros({GridKind::Chebyshev}, {nt + 1});
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j <= nt; ++j) row.values[j] = snaps[j].coeffs[i];
    CoeffSeries cs = cheb_analysis(row);
    for (std::size_t j = 0; j <= nt; ++j) out.coeffs[i * (nt + 1) + j] = cs.coeffs[j];
  }
  return out;
}

// Chebyshev nodes of [0, T], descending from T to 0.
std::vector<double> cheb_times(std::size_t nt, double T) {
  std::vector<double> xi = cheb_points(nt);
  std::vector<double> t(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) t[j] = T * (1.0 + xi[j]) / 2.0;
  return t;
}

// ---- per-problem generators --------------------------------------------

struct Generator {
  ProblemConfig cfg;
  GeneratedSet set;
  json samples = json::object();

  explicit Generator(ProblemConfig c) : cfg(std::move(c)) {}

  rng::Stream stream(std::size_t i) const { return rng::Stream(rng::derive(cfg.seed, "sample", i)); }

  void family_problem() {
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      CoeffSeries f = random_family_draw(static_cast<std::size_t>(cfg.k_min),
                                         static_cast<std::size_t>(cfg.k_max), cfg.sigma, st);
      CoeffSeries t;
      if (cfg.id == "identity")
        t = f;
      else if (cfg.id == "integrate")
        t = target_integrate(f);
      else if (cfg.id == "shift_product")
        t = target_shift_product(f);
      else if (cfg.id == "ode")
        t = parametric_ode_solution(f, cfg.target_band);
      else
        t = target_derivative(f); // derivative_10 / derivative_20
      set.inputs.push_back(std::move(f));
      set.targets.push_back(std::move(t));
    }
  }

  CoeffSeries coefficient_series(const CoeffSeries& g, double scale, std::size_t degree) {
    // k(x) = scale (tanh g(x) + 1) + 1 sampled on the Chebyshev grid.
    std::vector<double> x = cheb_points(degree);
    GridFunction kv = GridFunction::zeros({GridKind::Chebyshev}, {degree + 1});
    for (std::size_t j = 0; j <= degree; ++j)
      kv.values[j] = scale * (std::tanh(evaluate(g, x[j]).real()) + 1.0) + 1.0;
    return cheb_analysis(kv);
  }

  void elliptic_1d() {
    std::size_t deg_in = cfg.target_band;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      CoeffSeries g = random_family_draw(static_cast<std::size_t>(cfg.k_min),
                                         static_cast<std::size_t>(cfg.k_max), cfg.sigma, st);
      CoeffSeries kin = coefficient_series(g, 10.0, deg_in);
      GridFunction u = elliptic_solve_1d(kin, cfg.cheb_n);
      double umin = 0.0;
      for (const auto& v : u.values) umin = std::min(umin, v.real());
      if (umin < -1e-8) throw std::runtime_error("elliptic_1d: maximum principle violated");
      CoeffSeries t = chop(cheb_analysis(u), deg_in + 1);
      set.inputs.push_back(std::move(kin));
      set.targets.push_back(std::move(t));
    }
  }

  void elliptic_2d() {
    std::size_t n = cfg.cheb_n;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      CoeffSeries gx = random_family_draw(static_cast<std::size_t>(cfg.k_min),
                                          static_cast<std::size_t>(cfg.k_max), cfg.sigma, st);
      CoeffSeries gy = random_family_draw(static_cast<std::size_t>(cfg.k_min),
                                          static_cast<std::size_t>(cfg.k_max), cfg.sigma, st);
      CoeffSeries kx = coefficient_series(gx, 3.0, n);
      CoeffSeries ky = coefficient_series(gy, 3.0, n);
      CoeffSeries in = CoeffSeries::zeros({{BasisKind::Chebyshev}, {BasisKind::Chebyshev}}, {n + 1, n + 1});
      for (std::size_t a = 0; a <= n; ++a)
        for (std::size_t b = 0; b <= n; ++b) in.coeffs[a * (n + 1) + b] = kx.coeffs[a] * ky.coeffs[b];
      GridFunction u = elliptic_solve_2d(kx, ky, n);
      set.inputs.push_back(std::move(in));
      set.targets.push_back(analyze(u, {{BasisKind::Chebyshev}, {BasisKind::Chebyshev}}));
    }
  }

  void burgers(bool two_d) {
    BurgersConfig bc;
    bc.nu = cfg.nu;
    bc.dt = cfg.dt;
    bc.grid = cfg.grid;
    require(bc.dt <= 1e-3, "burgers: dt too large");
    if (bc.grid >= 100) require(bc.dt <= 1.0000001e-4, "burgers: reference resolution requires dt <= 1e-4");
    double mean_drift_max = 0.0;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      CoeffSeries f = random_family_draw(static_cast<std::size_t>(cfg.k_min),
                                         static_cast<std::size_t>(cfg.k_max), cfg.sigma, st);
      std::vector<double> times;
      if (two_d) {
        times = cheb_times(cfg.time_n, 1.0);
        std::reverse(times.begin(), times.end()); // solver wants ascending
      } else {
        times = {1.0};
      }
      std::vector<CoeffSeries> snaps = burgers_solve(f, bc, times);
      double e_prev = -1.0;
      for (std::size_t j = 0; j < snaps.size(); ++j) {
        double drift = std::abs(snaps[j].coeffs[0] - f.coeffs[0]);
        mean_drift_max = std::max(mean_drift_max, drift);
        if (drift > 1e-10) throw std::runtime_error("burgers: mean not conserved");
        double e = norm_l2(snaps[j]);
        e = e * e;
        if (e_prev >= 0.0 && e > e_prev * (1.0 + 1e-12) + 1e-14)
          throw std::runtime_error("burgers: energy increased between snapshots");
        e_prev = e;
      }
      if (two_d) {
        std::reverse(snaps.begin(), snaps.end()); // back to Chebyshev (descending) order
        set.targets.push_back(cheb_in_time(snaps));
      } else {
        set.targets.push_back(std::move(snaps[0]));
      }
      set.inputs.push_back(std::move(f));
    }
    samples["mean_drift_max"] = mean_drift_max;
  }

  CoeffSeries closed_form_slice(const std::function<double(double)>& u, std::size_t m) {
    std::vector<double> x = uniform_points(m);
    GridFunction g = GridFunction::zeros({GridKind::Uniform}, {m});
    for (std::size_t j = 0; j < m; ++j) g.values[j] = u(x[j]);
    return fourier_analysis(g, true);
  }

  // Parameter ranges keep every soliton peak inside [-1,1] for the whole time
  // window (travel is 4 a^2 T), so the non-periodic closed forms stay
  // representable in a Fourier basis: boundary tails ~ 4 exp(-2 a d).
  void kdv(bool two_solitons, bool two_d) {
    const double T = 0.001;
    std::size_t m = cfg.grid;
    json a_list = json::array(), b_list = json::array();
    double tail_max = 0.0;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      std::function<double(double, double)> u;
      if (two_solitons) {
        TwoSolitonParams p;
        p.a1 = st.uniform(8.0, 12.0);
        p.a2 = st.uniform(0.6, 0.8) * p.a1;
        p.x01 = 0.35;  // fast one starts behind, overtakes within the window
        p.x02 = 0.0;
        a_list.push_back(p.a1);
        b_list.push_back(p.a2);
        u = [p](double x, double t) { return kdv_two_soliton(p, x, t); };
      } else {
        SolitonParams p;
        p.a = st.uniform(10.0, 14.0); // speed a^2: stays in frame over T
        p.x0 = st.uniform(0.0, 0.35);
        a_list.push_back(p.a);
        b_list.push_back(p.x0);
        u = [p](double x, double t) { return kdv_soliton(p, x, t); };
      }
      // Fourier representability: the formulas are not periodic, so record how
      // large the field is at the domain edge relative to its peak.
      for (double t : {0.0, T}) {
        double peak = 0.0;
        for (double x : uniform_points(m)) peak = std::max(peak, std::abs(u(x, t)));
        double edge = std::max(std::abs(u(-1.0, t)), std::abs(u(1.0, t)));
        tail_max = std::max(tail_max, edge / peak);
      }
      set.inputs.push_back(closed_form_slice([&](double x) { return u(x, 0.0); }, m));
      if (two_d) {
        std::vector<CoeffSeries> snaps;
        for (double t : cheb_times(cfg.time_n, T))
          snaps.push_back(closed_form_slice([&](double x) { return u(x, t); }, m));
        set.targets.push_back(cheb_in_time(snaps));
      } else {
        set.targets.push_back(closed_form_slice([&](double x) { return u(x, T); }, m));
      }
    }
    if (tail_max > 0.2) throw std::runtime_error("kdv: boundary tails too large for a Fourier dataset");
    samples[two_solitons ? "a1" : "a"] = a_list;
    samples[two_solitons ? "a2" : "x0"] = b_list;
    samples["edge_tail_rel_max"] = tail_max;
  }

  void breather() {
    const double T = 5.0;
    std::size_t nx = cfg.cheb_n, nt = cfg.time_n;
    std::vector<double> x = cheb_points(nx);
    json nu_list = json::array();
    for (std::size_t i = 0; i < cfg.count; ++i) {
      rng::Stream st = stream(i);
      BreatherParams p;
      p.nu = st.uniform(1.5, 3.5);
      nu_list.push_back(p.nu);
      GridFunction g0 = GridFunction::zeros({GridKind::Chebyshev}, {nx + 1});
      for (std::size_t j = 0; j <= nx; ++j) g0.values[j] = km_breather_psi(p, x[j], 0.0).real();
      set.inputs.push_back(cheb_analysis(g0));
      std::vector<CoeffSeries> snaps;
      for (double t : cheb_times(nt, T)) {
        GridFunction gt = GridFunction::zeros({GridKind::Chebyshev}, {nx + 1});
        for (std::size_t j = 0; j <= nx; ++j) gt.values[j] = km_breather(p, x[j], t);
        snaps.push_back(cheb_analysis(gt));
      }
      set.targets.push_back(cheb_in_time(snaps));
    }
    samples["nu"] = nu_list;
  }
};

json axis_json(const CoeffSeries& s) {
  json out = json::array();
  for (std::size_t a = 0; a < s.rank(); ++a) {
    json ax;
    ax["basis"] = s.axes[a].kind == BasisKind::Chebyshev ? "chebyshev" : "fourier";
    ax["size"] = s.shape[a];
    if (s.axes[a].kind == BasisKind::Fourier) ax["real_signal"] = s.axes[a].real_signal;
    out.push_back(ax);
  }
  return out;
}

std::string canonical_id(const std::string& id) {
  if (id == "derivative") return "derivative_10";
  return id;
}

}  // namespace

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids = {
      "integrate",      "shift_product",  "derivative_10",      "derivative_20",
      "ode",            "elliptic_1d",    "elliptic_2d",        "burgers_01_1d",
      "burgers_001_1d", "burgers_01_2d",  "burgers_001_2d",     "kdv_soliton_1d",
      "kdv_soliton_2d", "kdv_two_soliton_1d", "kdv_two_soliton_2d", "breather_2d"};
  return ids;
}

bool is_known_problem(const std::string& id) {
  std::string c = canonical_id(id);
  if (c == "identity") return true;
  const auto& ids = problem_ids();
  return std::find(ids.begin(), ids.end(), c) != ids.end();
}

ProblemConfig default_config(const std::string& id) {
  require(is_known_problem(id), "unknown problem id: " + id);
  ProblemConfig cfg;
  cfg.id = canonical_id(id);
  const std::string& c = cfg.id;
  if (c == "identity") {
    cfg.k_min = 0; cfg.k_max = 10; cfg.sigma = 2.0;
  } else if (c == "integrate") {
    cfg.k_min = 1; cfg.k_max = 10; cfg.sigma = 2.0;
  } else if (c == "shift_product") {
    cfg.k_min = 0; cfg.k_max = 15; cfg.sigma = 2.0;
  } else if (c == "derivative_10") {
    cfg.k_min = 0; cfg.k_max = 10; cfg.sigma = 2.0;
  } else if (c == "derivative_20") {
    cfg.k_min = 0; cfg.k_max = 20; cfg.sigma = 2.0;
  } else if (c == "ode") {
    cfg.k_min = 1; cfg.k_max = 30; cfg.sigma = 2.0; cfg.target_band = 60;
  } else if (c == "elliptic_1d") {
    cfg.k_min = 0; cfg.k_max = 5; cfg.sigma = 1.0; cfg.cheb_n = 64; cfg.target_band = 48;
  } else if (c == "elliptic_2d") {
    cfg.k_min = 0; cfg.k_max = 4; cfg.sigma = 1.0; cfg.cheb_n = 24;
  } else if (c.rfind("burgers", 0) == 0) {
    cfg.k_min = 0; cfg.k_max = 20; cfg.sigma = 2.0;
    cfg.nu = (c.find("_001_") != std::string::npos) ? 0.01 : 0.1;
    cfg.dt = 2.5e-4; cfg.grid = 64; cfg.time_n = 16;
  } else if (c.rfind("kdv_soliton", 0) == 0) {
    cfg.grid = 129; cfg.time_n = 16;
  } else if (c.rfind("kdv_two_soliton", 0) == 0) {
    cfg.grid = 257; cfg.time_n = 16;
  } else if (c == "breather_2d") {
    cfg.cheb_n = 48; cfg.time_n = 80;
  }
  return cfg;
}

GeneratedSet generate_problem(const ProblemConfig& in_cfg) {
  require(is_known_problem(in_cfg.id), "unknown problem id: " + in_cfg.id);
  ProblemConfig defaults = default_config(in_cfg.id);
  ProblemConfig cfg = in_cfg;
  cfg.id = defaults.id;
  if (cfg.k_min < 0) cfg.k_min = defaults.k_min;
  if (cfg.k_max < 0) cfg.k_max = defaults.k_max;
  if (cfg.sigma <= 0.0) cfg.sigma = defaults.sigma;
  if (cfg.nu < 0.0) cfg.nu = defaults.nu;
  if (cfg.dt <= 0.0) cfg.dt = defaults.dt;
  if (cfg.grid == 0) cfg.grid = defaults.grid;
  if (cfg.cheb_n == 0) cfg.cheb_n = defaults.cheb_n;
  if (cfg.time_n == 0) cfg.time_n = defaults.time_n;
  if (cfg.target_band == 0) cfg.target_band = defaults.target_band;
  require(cfg.count > 0, "generate_problem: count > 0");

  Generator gen(cfg);
  const std::string& c = cfg.id;
  if (c == "identity" || c == "integrate" || c == "shift_product" || c == "ode" ||
      c.rfind("derivative", 0) == 0) {
    gen.family_problem();
  } else if (c == "elliptic_1d") {
    gen.elliptic_1d();
  } else if (c == "elliptic_2d") {
    gen.elliptic_2d();
  } else if (c.rfind("burgers", 0) == 0) {
    gen.burgers(c.size() >= 2 && c.substr(c.size() - 2) == "2d");
  } else if (c.rfind("kdv", 0) == 0) {
    gen.kdv(c.rfind("kdv_two", 0) == 0, c.substr(c.size() - 2) == "2d");
  } else if (c == "breather_2d") {
    gen.breather();
  }

  GeneratedSet& set = gen.set;
  json m;
  m["format"] = "sno-dataset";
  m["version"] = 1;
  m["problem"] = cfg.id;
  m["dim"] = static_cast<int>(set.targets.front().rank());
  m["count"] = cfg.count;
  m["seed"] = cfg.seed;
  if (cfg.sigma > 0.0 && cfg.k_max >= 0) {
    m["family"] = {{"k_min", cfg.k_min}, {"k_max", cfg.k_max}, {"sigma", cfg.sigma}};
  }
  json solver = json::object();
  if (c.rfind("burgers", 0) == 0)
    solver = {{"nu", cfg.nu}, {"dt", cfg.dt}, {"grid", cfg.grid}, {"t_final", 1.0}};
  else if (c.rfind("kdv", 0) == 0)
    solver = {{"grid", cfg.grid}, {"t_final", 0.001}};
  else if (c.rfind("elliptic", 0) == 0)
    solver = {{"degree", cfg.cheb_n}};
  else if (c == "breather_2d")
    solver = {{"degree_x", cfg.cheb_n}, {"t_final", 5.0}};
  else if (c == "ode")
    solver = {{"target_band", cfg.target_band}};
  if (!solver.empty()) m["solver"] = solver;
  if (set.targets.front().rank() == 2) m["time_degree"] = cfg.time_n;
  m["input_axes"] = axis_json(set.inputs.front());
  m["target_axes"] = axis_json(set.targets.front());
  if (!gen.samples.empty()) m["samples"] = gen.samples;
  set.manifest = std::move(m);
  return set;
}

void write_dataset(const std::filesystem::path& dir, const GeneratedSet& set) {
  std::filesystem::create_directories(dir);
  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("write_dataset: cannot open " + (dir / "manifest.json").string());
  mf << set.manifest.dump(2) << '\n';
  write_specf(dir / "inputs.specf", stack_to_specf(set.inputs));
  write_specf(dir / "targets.specf", stack_to_specf(set.targets));
}

GeneratedSet read_dataset(const std::filesystem::path& dir) {
  GeneratedSet set;
  std::ifstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("read_dataset: cannot open " + (dir / "manifest.json").string());
  set.manifest = json::parse(mf);
  set.inputs = unstack_specf(read_specf(dir / "inputs.specf"));
  set.targets = unstack_specf(read_specf(dir / "targets.specf"));
  return set;
}

}  // namespace sno
