#include "dwave/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "dwave/quadrature.hpp"
#include "dwave/tridiag.hpp"

namespace dwave {

namespace {

class CascadeEngine {
 public:
  CascadeEngine(const WaveMasses& masses, const ModelParams& params, const Grid1D& grid,
                int n_max, const CascadeOptions& opt)
      : masses_(masses),
        params_(params),
        grid_(grid),
        n_max_(n_max),
        opt_(opt),
        wave_{DiffusionWave(1, masses.m1, params), DiffusionWave(2, masses.m2, params)} {
    if (!(opt.cfl > 0.0 && opt.cfl <= 1.0))
      throw std::invalid_argument("solve_cascade: cfl must lie in (0, 1]");
    const int nf = 2 * n_max_;
    xi_.assign(nf, std::vector<double>(grid.n, 0.0));
    xi_star_.assign(nf, std::vector<double>(grid.n, 0.0));
    rhs0_.assign(nf, std::vector<double>(grid.n, 0.0));
    if (opt.with_Xi) {
      Xi_.assign(2, std::vector<double>(grid.n, 0.0));
      Xi_star_.assign(2, std::vector<double>(grid.n, 0.0));
      Xi_rhs0_.assign(2, std::vector<double>(grid.n, 0.0));
    }
    flux_.assign(grid.n, 0.0);
    rhs1_.assign(grid.n, 0.0);
    b_.assign(grid.n, 0.0);
    for (auto& th : th_now_) th.assign(grid.n, 0.0);
    for (auto& th : th_next_) th.assign(grid.n, 0.0);
  }

  void check_domain(double t_end) const {
    const double need = params_.c * (t_end + 1.0) + opt_.margin * std::sqrt(t_end + 1.0);
    if (grid_.x_max < need || grid_.x_min > -need)
      throw std::invalid_argument("solve_cascade: domain too small for t_end (margin rule)");
  }

  WaveHierarchy march(double t_end, std::vector<double> checkpoints) {
    check_domain(t_end);
    std::sort(checkpoints.begin(), checkpoints.end());
    for (double tc : checkpoints)
      if (tc < 0.0 || tc > t_end * (1.0 + 1e-12))
        throw std::invalid_argument("solve_cascade: checkpoint outside [0, t_end]");

    WaveHierarchy out;
    out.grid = grid_;
    out.params = params_;
    out.masses = masses_;
    out.n_max = n_max_;
    out.has_Xi = opt_.with_Xi;

    const double dt_base = opt_.cfl * grid_.dx / params_.c;
    double t = 0.0;
    size_t next_cp = 0;
    wave_[0].fill(grid_, t, th_now_[0]);
    wave_[1].fill(grid_, t, th_now_[1]);
    if (opt_.observer) opt_.observer(t, xi_, Xi_);
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= 1e-14) {
      snapshot(out, t);
      ++next_cp;
    }

    while (t < t_end - 1e-12 * (1.0 + t_end)) {
      double target = t_end;
      if (next_cp < checkpoints.size()) target = std::min(target, checkpoints[next_cp]);
      double dt = std::min(dt_base, target - t);
      step(t, dt);
      t += dt;
      guard_boundary(4);
      if (opt_.observer) opt_.observer(t, xi_, Xi_);
      if (next_cp < checkpoints.size() &&
          std::abs(t - checkpoints[next_cp]) <= 1e-10 * (1.0 + t)) {
        guard_boundary(std::max(1, grid_.n / 100));
        snapshot(out, t);
        ++next_cp;
      }
    }
    return out;
  }

 private:
  // conservative central divergence of `flux_` into rhs (with a minus sign)
  void flux_divergence(std::vector<double>& rhs) const {
    const double inv2dx = 1.0 / (2.0 * grid_.dx);
    rhs[0] = 0.0;
    rhs[grid_.n - 1] = 0.0;
    for (int j = 1; j < grid_.n - 1; ++j) rhs[j] = -(flux_[j + 1] - flux_[j - 1]) * inv2dx;
  }

  // rhs of a level field: -d_x(lambda_i xi + theta_i xi + theta_{i'} lower)
  void level_rhs(int i, int n, const std::vector<std::vector<double>>& xi,
                 const std::array<std::vector<double>, 2>& th, std::vector<double>& rhs) {
    const int ip = 3 - i;
    const double lam = params_.lambda(i);
    const auto& F = xi[idx(i, n)];
    const auto& thi = th[i - 1];
    const auto& thp = th[ip - 1];
    if (n == 1) {
      for (int j = 0; j < grid_.n; ++j)
        flux_[j] = lam * F[j] + thi[j] * F[j] + 0.5 * thp[j] * thp[j];
    } else {
      const auto& low = xi[idx(ip, n - 1)];
      for (int j = 0; j < grid_.n; ++j)
        flux_[j] = lam * F[j] + thi[j] * F[j] + thp[j] * low[j];
    }
    flux_divergence(rhs);
  }

  // rhs of a unified field: -d_x(lambda_i Xi_i + theta_{i'}^2/2 + theta_1 Xi_1 + theta_2 Xi_2)
  void unified_rhs(int i, const std::vector<std::vector<double>>& Xi,
                   const std::array<std::vector<double>, 2>& th, std::vector<double>& rhs) {
    const int ip = 3 - i;
    const double lam = params_.lambda(i);
    const auto& F = Xi[i - 1];
    const auto& thp = th[ip - 1];
    for (int j = 0; j < grid_.n; ++j)
      flux_[j] = lam * F[j] + 0.5 * thp[j] * thp[j] + th[0][j] * Xi[0][j] + th[1][j] * Xi[1][j];
    flux_divergence(rhs);
  }

  // (I - (dt/2) (nu/2) D2) out = F + dt_weight terms; Dirichlet zero rows at the ends
  void cn_solve(const std::vector<double>& F, const std::vector<double>& expl,
                double beta, std::vector<double>& out) {
    const int n = grid_.n;
    b_[0] = 0.0;
    b_[n - 1] = 0.0;
    for (int j = 1; j < n - 1; ++j)
      b_[j] = F[j] + expl[j] + beta * (F[j + 1] - 2.0 * F[j] + F[j - 1]);
    tri_.solve(b_);
    out = b_;
  }

  void ensure_factor(double dt) {
    if (dt == tri_dt_) return;
    const int n = grid_.n;
    const double beta = dt * params_.nu / (4.0 * grid_.dx * grid_.dx);
    std::vector<double> lo(n - 1, -beta), di(n, 1.0 + 2.0 * beta), up(n - 1, -beta);
    di[0] = di[n - 1] = 1.0;
    up[0] = 0.0;
    lo[n - 2] = 0.0;
    tri_.factor(std::move(lo), std::move(di), std::move(up));
    tri_dt_ = dt;
  }

  void step(double t, double dt) {
    ensure_factor(dt);
    const double beta = dt * params_.nu / (4.0 * grid_.dx * grid_.dx);
    wave_[0].fill(grid_, t + dt, th_next_[0]);
    wave_[1].fill(grid_, t + dt, th_next_[1]);

    // predictor: explicit terms at t, half-step diffusion on both sides
    for (int n = 1; n <= n_max_; ++n)
      for (int i = 1; i <= 2; ++i) {
        const int k = idx(i, n);
        level_rhs(i, n, xi_, th_now_, rhs0_[k]);
        for (int j = 0; j < grid_.n; ++j) rhs1_[j] = dt * rhs0_[k][j];
        cn_solve(xi_[k], rhs1_, beta, xi_star_[k]);
      }
    if (opt_.with_Xi)
      for (int i = 1; i <= 2; ++i) {
        unified_rhs(i, Xi_, th_now_, Xi_rhs0_[i - 1]);
        for (int j = 0; j < grid_.n; ++j) rhs1_[j] = dt * Xi_rhs0_[i - 1][j];
        cn_solve(Xi_[i - 1], rhs1_, beta, Xi_star_[i - 1]);
      }

    // corrector: trapezoid of the explicit terms, Crank-Nicolson diffusion.
    // All stage rhs are formed from the predictor fields before any solve
    // overwrites them (levels are coupled across families).
    for (int n = 1; n <= n_max_; ++n)
      for (int i = 1; i <= 2; ++i) {
        const int k = idx(i, n);
        level_rhs(i, n, xi_star_, th_next_, rhs1_);
        for (int j = 0; j < grid_.n; ++j)
          rhs0_[k][j] = 0.5 * dt * (rhs0_[k][j] + rhs1_[j]);
      }
    if (opt_.with_Xi)
      for (int i = 1; i <= 2; ++i) {
        unified_rhs(i, Xi_star_, th_next_, rhs1_);
        for (int j = 0; j < grid_.n; ++j)
          Xi_rhs0_[i - 1][j] = 0.5 * dt * (Xi_rhs0_[i - 1][j] + rhs1_[j]);
      }
    for (int k = 0; k < 2 * n_max_; ++k) cn_solve(xi_[k], rhs0_[k], beta, xi_star_[k]);
    if (opt_.with_Xi)
      for (int i = 0; i < 2; ++i) cn_solve(Xi_[i], Xi_rhs0_[i], beta, Xi_star_[i]);

    for (int k = 0; k < 2 * n_max_; ++k) xi_[k].swap(xi_star_[k]);
    if (opt_.with_Xi)
      for (int i = 0; i < 2; ++i) Xi_[i].swap(Xi_star_[i]);
    th_now_.swap(th_next_);
  }

  void guard_boundary(int edge) const {
    const int n = grid_.n;
    auto check = [&](const std::vector<double>& f) {
      for (int j = 0; j < edge; ++j)
        if (std::abs(f[j]) > opt_.boundary_threshold ||
            std::abs(f[n - 1 - j]) > opt_.boundary_threshold)
          throw std::runtime_error("solve_cascade: wave reached the domain boundary");
    };
    for (const auto& f : xi_) check(f);
    for (const auto& f : Xi_) check(f);
  }

  void snapshot(WaveHierarchy& out, double t) {
    out.times.push_back(t);
    std::array<ScalarField, 2> th{ScalarField(grid_, t), ScalarField(grid_, t)};
    for (int i = 0; i < 2; ++i) wave_[i].fill(grid_, t, th[i].v);
    out.theta.push_back(std::move(th));
    std::vector<std::array<ScalarField, 2>> lv;
    std::vector<double> mass;
    for (int n = 1; n <= n_max_; ++n) {
      std::array<ScalarField, 2> pair{ScalarField(grid_, t), ScalarField(grid_, t)};
      for (int i = 1; i <= 2; ++i) {
        pair[i - 1].v = xi_[idx(i, n)];
        mass.push_back(trapezoid(xi_[idx(i, n)], grid_.dx));
      }
      lv.push_back(std::move(pair));
    }
    out.xi.push_back(std::move(lv));
    out.xi_mass.push_back(std::move(mass));
    if (opt_.with_Xi) {
      std::array<ScalarField, 2> pair{ScalarField(grid_, t), ScalarField(grid_, t)};
      std::array<double, 2> xm{};
      for (int i = 0; i < 2; ++i) {
        pair[i].v = Xi_[i];
        xm[i] = trapezoid(Xi_[i], grid_.dx);
      }
      out.Xi.push_back(std::move(pair));
      out.Xi_mass.push_back(xm);
    }
  }

  int idx(int i, int n) const { return (n - 1) * 2 + (i - 1); }

  WaveMasses masses_;
  ModelParams params_;
  Grid1D grid_;
  int n_max_;
  CascadeOptions opt_;
  std::array<DiffusionWave, 2> wave_;
  std::vector<std::vector<double>> xi_, xi_star_, rhs0_;
  std::vector<std::vector<double>> Xi_, Xi_star_, Xi_rhs0_;
  std::array<std::vector<double>, 2> th_now_, th_next_;
  std::vector<double> flux_, rhs1_, b_;
  TridiagSolver tri_;
  double tri_dt_ = -1.0;
};

}  // namespace

WaveHierarchy solve_cascade(const WaveMasses& masses, const ModelParams& params,
                            const Grid1D& grid, int n_max, double t_end,
                            const std::vector<double>& checkpoints, const CascadeOptions& opt) {
  if (n_max < 1) throw std::invalid_argument("solve_cascade: n_max must be >= 1");
  CascadeEngine eng(masses, params, grid, n_max, opt);
  return eng.march(t_end, checkpoints);
}

WaveHierarchy solve_Xi(const WaveMasses& masses, const ModelParams& params, const Grid1D& grid,
                       double t_end, const std::vector<double>& checkpoints,
                       const CascadeOptions& opt) {
  CascadeOptions o = opt;
  o.with_Xi = true;
  CascadeEngine eng(masses, params, grid, 0, o);
  return eng.march(t_end, checkpoints);
}

double duhamel_oracle(const std::function<double(double, double)>& forcing, double lambda,
                      double nu, double x, double t, const DuhamelOptions& opt) {
  auto F = [&](double s) {
    return heat_kernel_dy_convolve(forcing, lambda, nu, x, t, s, opt.n_rho, opt.rho_max);
  };
  const double integral = fixed_simpson(F, 0.0, t, 2 * opt.n_s + 1);
  return integral / std::sqrt(2.0 * kPi * nu);
}

double heat_decomposition_residual(const SmoothSpaceTimeFn& f, double lambda, double lambda_p,
                                   double nu, double x, double t, const DuhamelOptions& opt) {
  if (lambda == lambda_p)
    throw std::invalid_argument("heat_decomposition_residual: need lambda != lambda'");
  if (!(t >= 1.0)) throw std::invalid_argument("heat_decomposition_residual: need t >= 1");
  const double root = std::sqrt(2.0 * kPi * nu);
  auto kconv = [&](const std::function<double(double)>& h, double tau) {
    return root * heat_convolve(h, lambda, nu, x, tau, opt.n_rho, opt.rho_max);
  };
  auto I_term = [&](double s) {
    return kconv([&](double y) { return f.ddx(y, s); }, t - s);
  };
  const double sqrt_t = std::sqrt(t);
  const double I = fixed_simpson(I_term, 0.0, t, 2 * opt.n_s + 1);
  const double main = root / (lambda - lambda_p) * f.value(x, t);
  const double I1 = fixed_simpson(I_term, 0.0, sqrt_t, 2 * opt.n_s + 1);
  const double I21 =
      -1.0 / (lambda - lambda_p) * kconv([&](double y) { return f.value(y, sqrt_t); }, t - sqrt_t);
  auto L_term = [&](double s) {
    return kconv([&](double y) { return f.lop(y, s); }, t - s);
  };
  const double I22 =
      -1.0 / (lambda - lambda_p) * fixed_simpson(L_term, sqrt_t, t, 2 * opt.n_s + 1);
  return std::abs(I - (main + I1 + I21 + I22));
}

std::vector<double> geometric_checkpoints(double t0, double ratio, double t_end) {
  if (!(t0 > 0.0) || !(ratio > 1.0) || !(t_end >= t0))
    throw std::invalid_argument("geometric_checkpoints: need t0 > 0, ratio > 1, t_end >= t0");
  std::vector<double> out;
  for (double t = t0; t <= t_end * (1.0 + 1e-12); t *= ratio) out.push_back(t);
  if (out.empty() || std::abs(out.back() - t_end) > 1e-9 * t_end) out.push_back(t_end);
  else out.back() = t_end;
  return out;
}

}  // namespace dwave
