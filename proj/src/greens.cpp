#include "dwave/greens.hpp"

#include <algorithm>
#include <cmath>

#include "dwave/quadrature.hpp"

namespace dwave {

double Matrix2::max_abs() const {
  return std::max(std::max(std::abs(a11), std::abs(a12)),
                  std::max(std::abs(a21), std::abs(a22)));
}

namespace {

Matrix2 gstar_var(double x, double t, double var, const ModelParams& p) {
  // var = nu t (+ sigma^2 when mollified)
  const double c = p.c;
  const double amp = 1.0 / (2.0 * std::sqrt(2.0 * kPi * var));
  const double gp = amp * std::exp(-(x - c * t) * (x - c * t) / (2.0 * var));
  const double gm = amp * std::exp(-(x + c * t) * (x + c * t) / (2.0 * var));
  Matrix2 m;
  m.a11 = gp + gm;
  m.a12 = -gp / c + gm / c;
  m.a21 = -gp * c + gm * c;
  m.a22 = gp + gm;
  return m;
}

}  // namespace

Matrix2 gstar(double x, double t, const ModelParams& params) {
  if (!(t > 0.0)) throw std::invalid_argument("gstar: need t > 0");
  return gstar_var(x, t, params.nu * t, params);
}

Matrix2 gstar_mollified(double x, double t, double sigma, const ModelParams& params) {
  if (!(t > 0.0)) throw std::invalid_argument("gstar_mollified: need t > 0");
  return gstar_var(x, t, params.nu * t + sigma * sigma, params);
}

QCoeffs q_coefficients(int k, const ModelParams& params) {
  QCoeffs out;
  if (k == 0) {
    out.Q = {1.0, 0.0, 0.0, 0.0};
  } else if (k == 1) {
    const double nu = params.nu, c = params.c;
    out.Q = {0.0, -1.0 / nu, -c * c / nu, 0.0};
  } else {
    throw std::invalid_argument("q_coefficients: only k = 0, 1 are tabulated");
  }
  for (int i = 1; i <= 2; ++i) {
    const auto& l = params.li(i);
    const std::array<double, 2> Ql_row{l[0] * out.Q.a11 + l[1] * out.Q.a21,
                                       l[0] * out.Q.a12 + l[1] * out.Q.a22};
    for (int j = 1; j <= 2; ++j) {
      const auto& r = params.ri(j);
      out.q[i - 1][j - 1] = Ql_row[0] * r[0] + Ql_row[1] * r[1];
    }
  }
  return out;
}

LinearTrajectory linear_evolve(const ScalarField& w1_0, const ScalarField& w2_0,
                               const ModelParams& params, double t_end,
                               const std::vector<double>& checkpoints,
                               const LinearOptions& opt) {
  if (!w1_0.grid.same_as(w2_0.grid))
    throw std::invalid_argument("linear_evolve: fields on different grids");
  const Grid1D grid = w1_0.grid;
  const int N = grid.n;
  const double dx = grid.dx;
  const double nu = params.nu, c2 = params.c * params.c;

  std::vector<double> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  for (double tc : cps)
    if (tc < 0.0 || tc > t_end * (1.0 + 1e-12))
      throw std::invalid_argument("linear_evolve: checkpoint outside [0, t_end]");

  std::vector<double> w1 = w1_0.v, w2 = w2_0.v;
  std::vector<double> w1s(N), w2s(N), r10(N), r20(N), r11(N), r21(N), visc0(N);
  std::vector<double> diag_w(N), rhs_w(N), btmp(N);

  auto dxc = [&](const std::vector<double>& f, std::vector<double>& r, double scale) {
    r[0] = r[N - 1] = 0.0;
    const double s = scale / (2.0 * dx);
    for (int j = 1; j < N - 1; ++j) r[j] = (f[j + 1] - f[j - 1]) * s;
  };
  // constant-coefficient CN solve: (I - (dt/2) nu D2) sol = rhs, zero boundary rows
  auto visc_solve = [&](double dt, const std::vector<double>& rhs, std::vector<double>& sol) {
    const double s = dt * nu / (2.0 * dx * dx);
    diag_w[0] = 1.0;
    rhs_w[0] = 0.0;
    for (int j = 1; j < N - 1; ++j) {
      const double up_prev = (j == 1) ? 0.0 : -s;
      const double m = -s / diag_w[j - 1];
      diag_w[j] = 1.0 + 2.0 * s - m * up_prev;
      rhs_w[j] = rhs[j] - m * rhs_w[j - 1];
    }
    sol[N - 1] = 0.0;
    for (int j = N - 2; j >= 1; --j) sol[j] = (rhs_w[j] + s * sol[j + 1]) / diag_w[j];
    sol[0] = 0.0;
  };

  LinearTrajectory out;
  out.grid = grid;
  out.params = params;
  const double dt_base = opt.cfl * dx / params.c;
  double t = 0.0;
  size_t next_cp = 0;
  auto snapshot = [&]() {
    std::array<ScalarField, 2> st{ScalarField(grid, t), ScalarField(grid, t)};
    st[0].v = w1;
    st[1].v = w2;
    out.times.push_back(t);
    out.mass.push_back({trapezoid(w1, dx), trapezoid(w2, dx)});
    out.states.push_back(std::move(st));
  };
  while (next_cp < cps.size() && cps[next_cp] <= 1e-14) {
    snapshot();
    ++next_cp;
  }

  while (t < t_end - 1e-12 * (1.0 + t_end)) {
    double target = t_end;
    if (next_cp < cps.size()) target = std::min(target, cps[next_cp]);
    const double dt = std::min(dt_base, target - t);

    // w1_t = d_x w2, w2_t = c^2 d_x w1 + nu w2_xx
    dxc(w2, r10, 1.0);
    dxc(w1, r20, c2);
    const double s = dt * nu / (2.0 * dx * dx);
    visc0[0] = visc0[N - 1] = 0.0;
    for (int j = 1; j < N - 1; ++j) visc0[j] = s * (w2[j + 1] - 2.0 * w2[j] + w2[j - 1]);
    for (int j = 0; j < N; ++j) w1s[j] = w1[j] + dt * r10[j];
    for (int j = 0; j < N; ++j) btmp[j] = w2[j] + dt * r20[j] + visc0[j];
    visc_solve(dt, btmp, w2s);

    dxc(w2s, r11, 1.0);
    dxc(w1s, r21, c2);
    for (int j = 0; j < N; ++j) w1[j] += 0.5 * dt * (r10[j] + r11[j]);
    for (int j = 0; j < N; ++j) btmp[j] = w2[j] + 0.5 * dt * (r20[j] + r21[j]) + visc0[j];
    visc_solve(dt, btmp, w2);

    t += dt;
    for (int j : {0, 1, 2, 3, N - 4, N - 3, N - 2, N - 1})
      if (std::abs(w1[j]) > opt.boundary_threshold || std::abs(w2[j]) > opt.boundary_threshold)
        throw std::runtime_error("linear_evolve: wave reached the domain boundary");

    if (next_cp < cps.size() && std::abs(t - cps[next_cp]) <= 1e-10 * (1.0 + t)) {
      snapshot();
      ++next_cp;
    }
  }
  return out;
}

GreensRun numerical_green(const ModelParams& params, double sigma, const Grid1D& grid,
                          double t_end, const std::vector<double>& checkpoints,
                          const LinearOptions& opt) {
  if (!(sigma >= 3.0 * grid.dx))
    throw std::invalid_argument("numerical_green: mollifier width must be >= 3 dx");
  ScalarField rho(grid, 0.0), zero(grid, 0.0);
  const double amp = 1.0 / (sigma * std::sqrt(2.0 * kPi));
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    rho[j] = amp * std::exp(-x * x / (2.0 * sigma * sigma));
  }
  const LinearTrajectory col1 = linear_evolve(rho, zero, params, t_end, checkpoints, opt);
  const LinearTrajectory col2 = linear_evolve(zero, rho, params, t_end, checkpoints, opt);

  GreensRun run;
  run.grid = grid;
  run.params = params;
  run.sigma = sigma;
  run.times = col1.times;
  for (size_t cp = 0; cp < col1.times.size(); ++cp) {
    Matrix2Field f;
    f.grid = grid;
    f.t = col1.times[cp];
    f.e[0] = col1.states[cp][0].v;  // G11
    f.e[2] = col1.states[cp][1].v;  // G21
    f.e[1] = col2.states[cp][0].v;  // G12
    f.e[3] = col2.states[cp][1].v;  // G22
    run.G.push_back(std::move(f));
    Matrix2 m;
    m.a11 = col1.mass[cp][0];
    m.a21 = col1.mass[cp][1];
    m.a12 = col2.mass[cp][0];
    m.a22 = col2.mass[cp][1];
    run.mass_matrix.push_back(m);
  }
  return run;
}

std::vector<double> gpwe_residual_series(const GreensRun& run) {
  std::vector<double> out;
  const double c2nu = run.params.c * run.params.c / run.params.nu;
  const double amp = 1.0 / (run.sigma * std::sqrt(2.0 * kPi));
  for (size_t cp = 0; cp < run.times.size(); ++cp) {
    const double t = run.times[cp];
    if (t <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    const double sing = std::exp(-c2nu * t);
    double sup = 0.0;
    for (int j = 0; j < run.grid.n; ++j) {
      const double x = run.grid.x(j);
      const Matrix2 ref = gstar_mollified(x, t, run.sigma, run.params);
      const double rho = sing * amp * std::exp(-x * x / (2.0 * run.sigma * run.sigma));
      const Matrix2 num = run.G[cp].at(j);
      const double r = std::max(
          std::max(std::abs(num.a11 - ref.a11 - rho), std::abs(num.a12 - ref.a12)),
          std::max(std::abs(num.a21 - ref.a21), std::abs(num.a22 - ref.a22)));
      sup = std::max(sup, r);
    }
    out.push_back(sup);
  }
  return out;
}

std::vector<double> gstar_supnorm_series(const GreensRun& run) {
  std::vector<double> out;
  for (size_t cp = 0; cp < run.times.size(); ++cp) {
    const double t = run.times[cp];
    double sup = 0.0;
    for (int j = 0; j < run.grid.n; ++j)
      sup = std::max(sup, gstar_mollified(run.grid.x(j), t, run.sigma, run.params).max_abs());
    out.push_back(sup);
  }
  return out;
}

namespace {

// diagonalized kernel row g_i = l_i G [r1 r2] at node j
std::array<double, 2> g_row(const GreensRun& run, size_t cp, int i, int j) {
  const auto& l = run.params.li(i);
  const Matrix2 G = run.G[cp].at(j);
  const std::array<double, 2> lG{l[0] * G.a11 + l[1] * G.a21, l[0] * G.a12 + l[1] * G.a22};
  std::array<double, 2> out{};
  for (int col = 1; col <= 2; ++col) {
    const auto& r = run.params.ri(col);
    out[col - 1] = lG[0] * r[0] + lG[1] * r[1];
  }
  return out;
}

double gstar_diag_moll(const GreensRun& run, int i, double x, double t) {
  const double var = run.params.nu * t + run.sigma * run.sigma;
  const double w = x - run.params.lambda(i) * t;
  return std::exp(-w * w / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

double gstar_diag_moll_dx(const GreensRun& run, int i, double x, double t) {
  const double var = run.params.nu * t + run.sigma * run.sigma;
  const double w = x - run.params.lambda(i) * t;
  return -(w / var) * gstar_diag_moll(run, i, x, t);
}

}  // namespace

std::vector<double> offdiag_supnorm_series(const GreensRun& run) {
  std::vector<double> out;
  for (size_t cp = 0; cp < run.times.size(); ++cp) {
    double sup = 0.0;
    for (int j = 0; j < run.grid.n; ++j) {
      const auto g1 = g_row(run, cp, 1, j);
      const auto g2 = g_row(run, cp, 2, j);
      sup = std::max(sup, std::max(std::abs(g1[1]), std::abs(g2[0])));
    }
    out.push_back(sup);
  }
  return out;
}

RefinedResidual refined_residual(int i, const GreensRun& run) {
  if (i != 1 && i != 2) throw std::invalid_argument("refined_residual: family must be 1 or 2");
  const int ip = 3 - i;
  RefinedResidual out;
  for (size_t cp = 0; cp < run.times.size(); ++cp) {
    const double t = run.times[cp];
    const double center = run.params.lambda(ip) * t;
    const double half = std::sqrt(t);
    int jlo = static_cast<int>(std::ceil((center - half - run.grid.x_min) / run.grid.dx));
    int jhi = static_cast<int>(std::floor((center + half - run.grid.x_min) / run.grid.dx));
    jlo = std::max(jlo, 0);
    jhi = std::min(jhi, run.grid.n - 1);
    double sup_with = 0.0, sup_without = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double x = run.grid.x(j);
      const auto g = g_row(run, cp, i, j);
      const double own = g[i - 1] - gstar_diag_moll(run, i, x, t);
      const double cross_raw = g[ip - 1];
      const double cross_corr =
          cross_raw - run.params.gamma_i(ip) * gstar_diag_moll_dx(run, ip, x, t);
      sup_without = std::max(sup_without, std::max(std::abs(own), std::abs(cross_raw)));
      sup_with = std::max(sup_with, std::max(std::abs(own), std::abs(cross_corr)));
    }
    out.with_gamma.push_back(sup_with);
    out.without_gamma.push_back(sup_without);
  }
  return out;
}

}  // namespace dwave
