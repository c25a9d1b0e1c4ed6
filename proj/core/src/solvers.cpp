#include "sno/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sno/transforms.hpp"

namespace sno {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Real node values of a 1D series of either basis.
Eigen::VectorXd series_at_nodes(const CoeffSeries& s, const std::vector<double>& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) out[static_cast<Eigen::Index>(j)] = evaluate(s, x[j]).real();
  return out;
}

}  // namespace

Eigen::MatrixXd cheb_diff_matrix(std::size_t n) {
  require(n >= 1, "cheb_diff_matrix: n >= 1");
  const std::vector<double> x = cheb_points(n);
  const auto N = static_cast<Eigen::Index>(n + 1);
  Eigen::VectorXd c(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    double w = (i == 0 || i == N - 1) ? 2.0 : 1.0;
    c[i] = (i % 2 == 0) ? w : -w;
  }
  Eigen::MatrixXd D(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      D(i, j) = (c[i] / c[j]) / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
      row_sum += D(i, j);
    }
    D(i, i) = -row_sum; // exact on constants by construction
  }
  return D;
}

namespace {

GridFunction solve_dense(Eigen::MatrixXd A, Eigen::VectorXd rhs, std::vector<GridKind> grids,
                         std::vector<std::size_t> shape) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd u = lu.solve(rhs);
  double resid = (A * u - rhs).lpNorm<Eigen::Infinity>();
  if (!(resid <= 1e-6 * (1.0 + rhs.lpNorm<Eigen::Infinity>())))
    throw std::runtime_error("elliptic solve: singular or ill-conditioned system");
  GridFunction out = GridFunction::zeros(std::move(grids), std::move(shape));
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = u[static_cast<Eigen::Index>(i)];
  return out;
}

}  // namespace

GridFunction elliptic_solve_1d(const CoeffSeries& k, std::size_t n, const Eigen::VectorXd& forcing) {
  require(n >= 2, "elliptic_solve_1d: n >= 2");
  require(k.rank() == 1, "elliptic_solve_1d: k must be 1D");
  const auto N = static_cast<Eigen::Index>(n + 1);
  require(forcing.size() == 0 || forcing.size() == N, "elliptic_solve_1d: forcing size mismatch");
  const std::vector<double> x = cheb_points(n);
  Eigen::VectorXd kv = series_at_nodes(k, x);
  require(kv.minCoeff() > 0.0, "elliptic_solve_1d: k must be positive on the nodes");

  Eigen::MatrixXd D = cheb_diff_matrix(n);
  Eigen::MatrixXd A = D * kv.asDiagonal() * D;
  // -(k u')' = f  =>  A u = -f
  Eigen::VectorXd rhs = forcing.size() ? Eigen::VectorXd(-forcing) : Eigen::VectorXd::Constant(N, -1.0);
  A.row(0).setZero();
  A(0, 0) = 1.0;
  rhs[0] = 0.0;
  A.row(N - 1).setZero();
  A(N - 1, N - 1) = 1.0;
  rhs[N - 1] = 0.0;
  return solve_dense(std::move(A), std::move(rhs), {GridKind::Chebyshev}, {n + 1});
}

GridFunction elliptic_solve_2d(const CoeffSeries& kx, const CoeffSeries& ky, std::size_t n,
                               const Eigen::VectorXd& forcing) {
  require(n >= 2, "elliptic_solve_2d: n >= 2");
  if (n > 48) throw std::invalid_argument("elliptic_solve_2d: n > 48 exceeds the dense-LU guard");
  const std::size_t N1 = n + 1;
  const auto total = static_cast<Eigen::Index>(N1 * N1);
  require(forcing.size() == 0 || forcing.size() == total, "elliptic_solve_2d: forcing size mismatch");
  const std::vector<double> x = cheb_points(n);
  Eigen::VectorXd kxv = series_at_nodes(kx, x);
  Eigen::VectorXd kyv = series_at_nodes(ky, x);
  require(kxv.minCoeff() > 0.0 && kyv.minCoeff() > 0.0, "elliptic_solve_2d: k must be positive");

  Eigen::MatrixXd D = cheb_diff_matrix(n);
  Eigen::MatrixXd Ax = D * kxv.asDiagonal() * D;
  Eigen::MatrixXd Ay = D * kyv.asDiagonal() * D;

  // Row-major flattening r = ix*N1 + iy; the operator is
  // Ax (x) diag(ky) + diag(kx) (x) Ay.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(total, total);
  for (std::size_t ix = 0; ix < N1; ++ix)
    for (std::size_t iy = 0; iy < N1; ++iy) {
      const auto r = static_cast<Eigen::Index>(ix * N1 + iy);
      for (std::size_t jx = 0; jx < N1; ++jx)
        A(r, static_cast<Eigen::Index>(jx * N1 + iy)) +=
            Ax(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(jx)) * kyv[static_cast<Eigen::Index>(iy)];
      for (std::size_t jy = 0; jy < N1; ++jy)
        A(r, static_cast<Eigen::Index>(ix * N1 + jy)) +=
            kxv[static_cast<Eigen::Index>(ix)] * Ay(static_cast<Eigen::Index>(iy), static_cast<Eigen::Index>(jy));
    }
  Eigen::VectorXd rhs = forcing.size() ? Eigen::VectorXd(-forcing) : Eigen::VectorXd::Constant(total, -1.0);
  for (std::size_t ix = 0; ix < N1; ++ix)
    for (std::size_t iy = 0; iy < N1; ++iy) {
      if (ix != 0 && ix != n && iy != 0 && iy != n) continue;
      const auto r = static_cast<Eigen::Index>(ix * N1 + iy);
      A.row(r).setZero();
      A(r, r) = 1.0;
      rhs[r] = 0.0;
    }
  return solve_dense(std::move(A), std::move(rhs), {GridKind::Chebyshev, GridKind::Chebyshev}, {N1, N1});
}

namespace {

struct BurgersState {
  std::size_t m = 0;
  std::size_t mpad = 0;
  double nu = 0.0;
  double limit = 0.0;
  std::vector<long long> harmonics;  // signed k per FFT bin
  std::vector<cplx> deriv;           // i pi k, zeroed on the shared Nyquist bin
  std::vector<double> lin;           // -nu (pi k)^2

  explicit BurgersState(const BurgersConfig& cfg) {
    m = cfg.grid;
    mpad = 3 * m / 2;
    nu = cfg.nu;
    limit = cfg.blowup_limit;
    harmonics.resize(m);
    deriv.resize(m);
    lin.resize(m);
    const double pi = std::acos(-1.0);
    for (std::size_t t = 0; t < m; ++t) {
      long long k = fft_signed_harmonic(t, m);
      harmonics[t] = k;
      bool shared_nyquist = (m % 2 == 0) && (t == m / 2);
      deriv[t] = shared_nyquist ? cplx(0.0, 0.0) : cplx(0.0, pi * static_cast<double>(k));
      lin[t] = -nu * pi * pi * static_cast<double>(k * k);
    }
  }

  // Dealiased spectrum of u^2 (3/2-rule padding); also the blow-up checkpoint,
  // since this is where grid values materialize.
  std::vector<cplx> square(const std::vector<cplx>& c, double t_now) const {
    std::vector<cplx> p(mpad, cplx(0.0, 0.0));
    for (std::size_t t = 0; t < m; ++t) {
      long long k = harmonics[t];
      if (m % 2 == 0 && t == m / 2) {
        // shared bin holds c_{+m/2} + c_{-m/2}; split evenly for padding
        p[m / 2] += 0.5 * c[t];
        p[mpad - m / 2] += 0.5 * c[t];
      } else {
        p[k >= 0 ? static_cast<std::size_t>(k) : mpad - static_cast<std::size_t>(-k)] = c[t];
      }
    }
    detail::fft_inplace(p.data(), mpad, +1); // normalized spectrum -> true values
    double peak = 0.0;
    for (auto& v : p) {
      peak = std::max(peak, std::abs(v.real()));
      v *= v;
    }
    if (peak > limit) {
      std::ostringstream os;
      os << "burgers_solve: |u| reached " << peak << " at t = " << t_now << " (blow-up guard)";
      throw std::runtime_error(os.str());
    }
    detail::fft_inplace(p.data(), mpad, -1);
    const double inv = 1.0 / static_cast<double>(mpad);
    std::vector<cplx> out(m);
    for (std::size_t t = 0; t < m; ++t) {
      long long k = harmonics[t];
      if (m % 2 == 0 && t == m / 2)
        out[t] = (p[m / 2] + p[mpad - m / 2]) * inv;
      else
        out[t] = p[k >= 0 ? static_cast<std::size_t>(k) : mpad - static_cast<std::size_t>(-k)] * inv;
    }
    return out;
  }

  // N(c) = -(1/2) d/dx (u^2)^
  std::vector<cplx> nonlinear(const std::vector<cplx>& c, double t_now) const {
    std::vector<cplx> s = square(c, t_now);
    for (std::size_t t = 0; t < m; ++t) s[t] *= -0.5 * deriv[t];
    return s;
  }

  // One integrating-factor RK4 step of size h starting at time t0.
  void step(std::vector<cplx>& v, double t0, double h) const {
    std::vector<double> E(m), E2(m);
    for (std::size_t t = 0; t < m; ++t) {
      E[t] = std::exp(lin[t] * h / 2.0);
      E2[t] = E[t] * E[t];
    }
    std::vector<cplx> a = nonlinear(v, t0);
    std::vector<cplx> tmp(m);
    for (std::size_t t = 0; t < m; ++t) tmp[t] = E[t] * (v[t] + (h / 2.0) * a[t]);
    std::vector<cplx> b = nonlinear(tmp, t0 + h / 2.0);
    for (std::size_t t = 0; t < m; ++t) tmp[t] = E[t] * v[t] + (h / 2.0) * b[t];
    std::vector<cplx> c = nonlinear(tmp, t0 + h / 2.0);
    for (std::size_t t = 0; t < m; ++t) tmp[t] = E2[t] * v[t] + h * E[t] * c[t];
    std::vector<cplx> d = nonlinear(tmp, t0 + h);
    for (std::size_t t = 0; t < m; ++t)
      v[t] = E2[t] * v[t] + h * (E2[t] * a[t] + 2.0 * E[t] * (b[t] + c[t]) + d[t]) / 6.0;
  }
};

}  // namespace

std::vector<CoeffSeries> burgers_solve(const CoeffSeries& f, const BurgersConfig& cfg,
                                       const std::vector<double>& times) {
  require(f.rank() == 1 && f.axes[0].kind == BasisKind::Fourier, "burgers_solve: f must be 1D Fourier");
  require(cfg.grid >= 8 && cfg.grid % 2 == 0, "burgers_solve: grid must be even and >= 8");
  require(cfg.nu > 0.0, "burgers_solve: nu > 0 required");
  require(cfg.dt > 0.0, "burgers_solve: dt > 0 required");
  require(std::is_sorted(times.begin(), times.end()), "burgers_solve: times must be non-decreasing");
  require(times.empty() || times.front() >= 0.0, "burgers_solve: times must be non-negative");

  BurgersState st(cfg);
  const std::size_t m = cfg.grid;

  // Initial spectrum: exact samples of f, forward FFT, normalize.
  GridFunction g0 = fourier_synthesis(f, m);
  std::vector<cplx> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = cplx(g0.values[j].real(), 0.0);
  detail::fft_inplace(v.data(), m, -1);
  for (auto& c : v) c /= static_cast<double>(m);

  std::vector<CoeffSeries> out;
  out.reserve(times.size());
  double t_cur = 0.0;
  const double eps = cfg.dt * 1e-9;
  for (double target : times) {
    auto steps = static_cast<long long>(std::floor((target - t_cur) / cfg.dt + 1e-9));
    for (long long i = 0; i < steps; ++i) {
      st.step(v, t_cur, cfg.dt);
      t_cur += cfg.dt;
    }
    double rem = target - t_cur;
    if (rem > eps) {
      st.step(v, t_cur, rem);
      t_cur = target;
    }
    std::vector<cplx> vals = v;
    detail::fft_inplace(vals.data(), m, +1);
    GridFunction g = GridFunction::zeros({GridKind::Uniform}, {m});
    for (std::size_t j = 0; j < m; ++j) g.values[j] = cplx(vals[j].real(), 0.0);
    out.push_back(fourier_analysis(g, true));
  }
  return out;
}

namespace {

// sech^2 via q = exp(-2|t|); overflow-free, underflows cleanly to 0.
double sech_sq(double t) {
  double q = std::exp(-2.0 * std::abs(t));
  double d = 1.0 + q;
  return 4.0 * q / (d * d);
}

}  // namespace

double kdv_soliton(const SolitonParams& p, double x, double t) {
  double theta = p.a * (x + p.x0) / 2.0 - p.a * p.a * p.a * t / 2.0;
  return 3.0 * p.a * p.a * sech_sq(theta);
}

double kdv_two_soliton(const TwoSolitonParams& p, double x, double t) {
  require(p.a1 > p.a2 && p.a2 > 0.0, "kdv_two_soliton: requires a1 > a2 > 0");
  double phi1 = p.a1 * (x + p.x01) - 4.0 * p.a1 * p.a1 * p.a1 * t;
  double phi2 = p.a2 * (x + p.x02) - 4.0 * p.a2 * p.a2 * p.a2 * t;
  // cosh phi = e^{|phi|} C, sinh phi = e^{|phi|} S with C, S bounded; the
  // e^{|phi|} prefactors of numerator and denominator cancel exactly.
  double q1 = std::exp(-2.0 * std::abs(phi1));
  double q2 = std::exp(-2.0 * std::abs(phi2));
  double C1 = (1.0 + q1) / 2.0, S1 = std::copysign((1.0 - q1) / 2.0, phi1);
  double C2 = (1.0 + q2) / 2.0, S2 = std::copysign((1.0 - q2) / 2.0, phi2);
  double amp = p.a1 * p.a1 - p.a2 * p.a2;
  double den = p.a1 * C1 * C2 - p.a2 * S1 * S2; // > 0 since a1 > a2 and |S| < C
  double num = 2.0 * p.a2 * p.a2 * amp * S1 * S1 * q2 + 2.0 * p.a1 * p.a1 * amp * C2 * C2 * q1;
  return num / (den * den);
}

double BreatherParams::p() const { return 2.0 * std::sqrt(nu * nu - 1.0); }
double BreatherParams::omega() const { return p() * nu; }

std::complex<double> km_breather_psi(const BreatherParams& bp, double x, double t) {
  require(bp.nu > 1.0, "km_breather: nu > 1 required");
  double p = bp.p();
  double w = bp.omega();
  std::complex<double> num(-p * p * std::cos(w * t), -2.0 * p * bp.nu * std::sin(w * t));
  double den = 2.0 * std::cos(w * t) - 2.0 * bp.nu * std::cosh(p * x / std::sqrt(2.0));
  std::complex<double> phase(std::cos(t), std::sin(t));
  return (num / den - 1.0) * phase;
}

double km_breather(const BreatherParams& bp, double x, double t) {
  return std::abs(km_breather_psi(bp, x, t));
}

}  // namespace sno
