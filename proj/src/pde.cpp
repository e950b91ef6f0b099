#include "dwave/pde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "dwave/quadrature.hpp"
#include "dwave/waves.hpp"

namespace dwave {

namespace {

double lerp_table(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const size_t j = it - xs.begin();
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

}  // namespace

InitialData build_initial_data(DataKind kind, double amp_v, double amp_u, double width,
                               const Grid1D& grid, const ModelParams& params) {
  if (kind == DataKind::table)
    throw std::invalid_argument("build_initial_data: use build_initial_data_table");
  if (kind == DataKind::wavepair)
    throw std::invalid_argument("build_initial_data: use build_wavepair_data");
  if (!(width > 0.0)) throw std::invalid_argument("build_initial_data: width must be positive");
  InitialData d;
  d.kind = kind;
  d.amp_v = amp_v;
  d.amp_u = amp_u;
  d.width = width;
  d.state.v = ScalarField(grid, 0.0);
  d.state.u = ScalarField(grid, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double bump = std::exp(-(x / width) * (x / width));
    double sv, su;
    if (kind == DataKind::gaussian) {
      sv = bump;
      su = bump;
    } else {
      const double dbump = -2.0 * x / (width * width) * bump;
      sv = dbump;
      su = dbump;
    }
    d.state.v[j] = 1.0 + amp_v * sv;
    d.state.u[j] = amp_u * su;
  }
  for (int j = 0; j < grid.n; ++j)
    if (!(d.state.v[j] > 0.5))
      throw std::invalid_argument("build_initial_data: amplitude leaves v <= 1/2");
  const auto uc = to_characteristic(d.state, params);
  d.wave_masses = masses(uc[0], uc[1]);
  return d;
}

InitialData build_initial_data_table(const std::vector<double>& xs, const std::vector<double>& vs,
                                     const std::vector<double>& us, const Grid1D& grid,
                                     const ModelParams& params) {
  if (xs.size() != vs.size() || xs.size() != us.size() || xs.size() < 2)
    throw std::invalid_argument("build_initial_data_table: bad table sizes");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("build_initial_data_table: x column must be increasing");
  InitialData d;
  d.kind = DataKind::table;
  d.state.v = ScalarField(grid, 0.0);
  d.state.u = ScalarField(grid, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    d.state.v[j] = lerp_table(xs, vs, grid.x(j));
    d.state.u[j] = lerp_table(xs, us, grid.x(j));
  }
  for (int j = 0; j < grid.n; ++j)
    if (!(d.state.v[j] > 0.0))
      throw std::invalid_argument("build_initial_data_table: v must stay positive");
  const auto uc = to_characteristic(d.state, params);
  d.wave_masses = masses(uc[0], uc[1]);
  return d;
}

InitialData build_wavepair_data(const WaveMasses& target, const ModelParams& params,
                                const Grid1D& grid) {
  InitialData d;
  d.kind = DataKind::wavepair;
  ScalarField u1(grid, 0.0), u2(grid, 0.0);
  {
    const DiffusionWave w1(1, target.m1, params);
    const DiffusionWave w2(2, target.m2, params);
    w1.fill(grid, 0.0, u1.v);
    w2.fill(grid, 0.0, u2.v);
  }
  d.state = from_characteristic(u1, u2, params);
  d.wave_masses = masses(u1, u2);
  return d;
}

namespace {

// power-of-two iterative radix-2 transform; enough for a one-off norm diagnostic
void fft_inplace(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// squared Sobolev norm of order `order` of grid data, via the padded DFT
double sobolev_sq(const std::vector<double>& f, double dx, int order) {
  size_t npad = 1;
  while (npad < 2 * f.size()) npad <<= 1;
  std::vector<std::complex<double>> a(npad, 0.0);
  for (size_t j = 0; j < f.size(); ++j) a[j] = f[j];
  fft_inplace(a);
  const double L = static_cast<double>(npad) * dx;
  double sum = 0.0;
  for (size_t k = 0; k < npad; ++k) {
    const double kk = (k <= npad / 2) ? static_cast<double>(k)
                                      : static_cast<double>(k) - static_cast<double>(npad);
    const double om2 = (2.0 * kPi * kk / L) * (2.0 * kPi * kk / L);
    double w = 1.0, p = 1.0;
    for (int m = 1; m <= order; ++m) {
      p *= om2;
      w += p;
    }
    sum += w * std::norm(a[k]);
  }
  return sum * dx / static_cast<double>(npad);
}

std::vector<double> deriv_fd4(const std::vector<double>& f, double dx) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n, 0.0);
  for (int j = 2; j < n - 2; ++j)
    d[j] = (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * dx);
  if (n >= 3) {
    d[1] = (f[2] - f[0]) / (2.0 * dx);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * dx);
  }
  return d;
}

}  // namespace

double smallness_delta(const InitialData& data, int n) {
  const auto& grid = data.state.v.grid;
  const int N = grid.n;
  const double dx = grid.dx;
  std::vector<double> f1(N), f2(N);
  for (int j = 0; j < N; ++j) {
    f1[j] = data.state.v[j] - 1.0;
    f2[j] = data.state.u[j];
  }
  const auto ab = alpha_beta(n);

  const double h6 = std::sqrt(sobolev_sq(f1, dx, 6) + sobolev_sq(f2, dx, 6));

  double sup_val = 0.0;
  const auto d1 = deriv_fd4(f1, dx), d2 = deriv_fd4(f2, dx);
  for (int j = 0; j < N; ++j) {
    const double w = std::pow(std::abs(grid.x(j)) + 1.0, ab.alpha);
    const double wd = std::pow(std::abs(grid.x(j)) + 1.0, 1.25);
    sup_val = std::max(sup_val, w * std::hypot(f1[j], f2[j]) + wd * std::hypot(d1[j], d2[j]));
  }

  // anti-derivative tails: cumulative trapezoid from the left
  std::vector<double> c1(N, 0.0), c2(N, 0.0);
  for (int j = 1; j < N; ++j) {
    c1[j] = c1[j - 1] + 0.5 * dx * (f1[j - 1] + f1[j]);
    c2[j] = c2[j - 1] + 0.5 * dx * (f2[j - 1] + f2[j]);
  }
  const double tot1 = c1[N - 1], tot2 = c2[N - 1];
  auto minus_at = [&](double x, const std::vector<double>& c) {
    const double pos = (x - grid.x_min) / dx;
    const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, N - 2);
    const double w = pos - j;
    return (1.0 - w) * c[j] + w * c[j + 1];
  };
  double sup_tail = 0.0;
  for (int j = 0; j < N; ++j) {
    const double x = grid.x(j);
    if (x <= 0.0) continue;
    const double um1 = minus_at(-x, c1), um2 = minus_at(-x, c2);
    const double up1 = tot1 - minus_at(x, c1), up2 = tot2 - minus_at(x, c2);
    const double w = std::pow(x + 1.0, ab.beta);
    sup_tail = std::max(sup_tail, w * (std::hypot(um1, um2) + std::hypot(up1, up2)));
  }
  return h6 + sup_val + sup_tail;
}

Trajectory solve_p_system(const InitialData& data, const PressureLaw& law,
                          const ModelParams& params, const Grid1D& grid, double t_end,
                          const std::vector<double>& checkpoints, const PdeOptions& opt) {
  if (!data.state.v.grid.same_as(grid))
    throw std::invalid_argument("solve_p_system: data not on the given grid");
  {
    const double need = params.c * (t_end + 1.0) + opt.margin * std::sqrt(t_end + 1.0);
    if (grid.x_max < need || grid.x_min > -need)
      throw std::invalid_argument("solve_p_system: domain too small for t_end (margin rule)");
    const double delta = smallness_delta(data, 1);
    if (delta > opt.delta_cap)
      throw std::invalid_argument("solve_p_system: data smallness functional exceeds cap");
  }
  std::vector<double> cps = checkpoints;
  std::sort(cps.begin(), cps.end());
  for (double tc : cps)
    if (tc < 0.0 || tc > t_end * (1.0 + 1e-12))
      throw std::invalid_argument("solve_p_system: checkpoint outside [0, t_end]");

  const int N = grid.n;
  const double dx = grid.dx;
  const double nu = params.nu;
  std::vector<double> v = data.state.v.v, u = data.state.u.v;
  std::vector<double> vs(N), us(N), rv0(N), ru0(N), rv1(N), ru1(N), pv(N), kap(N - 1);

  Trajectory out;
  out.grid = grid;
  out.params = params;
  std::vector<double> vm(N);
  auto int_excess = [&](const std::vector<double>& f, double shift) {
    for (int j = 0; j < N; ++j) vm[j] = f[j] - shift;
    return trapezoid(vm, dx);
  };
  out.int_v0 = int_excess(v, 1.0);
  out.int_u0 = int_excess(u, 0.0);

  auto dxc = [&](const std::vector<double>& f, std::vector<double>& r) {
    r[0] = r[N - 1] = 0.0;
    const double s = 1.0 / (2.0 * dx);
    for (int j = 1; j < N - 1; ++j) r[j] = (f[j + 1] - f[j - 1]) * s;
  };
  auto pressure_grad = [&](const std::vector<double>& vv, std::vector<double>& r) {
    for (int j = 0; j < N; ++j) pv[j] = law.p(vv[j]);
    r[0] = r[N - 1] = 0.0;
    const double s = 1.0 / (2.0 * dx);
    for (int j = 1; j < N - 1; ++j) r[j] = -(pv[j + 1] - pv[j - 1]) * s;
  };
  auto faces = [&](const std::vector<double>& vv) {
    for (int j = 0; j < N - 1; ++j) kap[j] = nu * 0.5 * (1.0 / vv[j] + 1.0 / vv[j + 1]);
  };
  auto visc_apply = [&](const std::vector<double>& uu, std::vector<double>& r) {
    r[0] = r[N - 1] = 0.0;
    const double s = 1.0 / (dx * dx);
    for (int j = 1; j < N - 1; ++j)
      r[j] = (kap[j] * (uu[j + 1] - uu[j]) - kap[j - 1] * (uu[j] - uu[j - 1])) * s;
  };
  // solve (I - (dt/2) Lvisc) sol = rhs with the current kap; Thomas pass on
  // preallocated work arrays (the matrix changes every stage)
  std::vector<double> diag_w(N), rhs_w(N);
  auto visc_solve = [&](double dt, const std::vector<double>& rhs, std::vector<double>& sol) {
    const double s = dt / (2.0 * dx * dx);
    diag_w[0] = 1.0;
    rhs_w[0] = 0.0;
    for (int j = 1; j < N - 1; ++j) {
      const double lo = -s * kap[j - 1];
      const double di = 1.0 + s * (kap[j - 1] + kap[j]);
      const double up_prev = (j == 1) ? 0.0 : -s * kap[j - 1];
      const double m = lo / diag_w[j - 1];
      diag_w[j] = di - m * up_prev;
      rhs_w[j] = rhs[j] - m * rhs_w[j - 1];
    }
    sol[N - 1] = 0.0;  // pinned boundary row
    for (int j = N - 2; j >= 1; --j)
      sol[j] = (rhs_w[j] + s * kap[j] * sol[j + 1]) / diag_w[j];
    sol[0] = 0.0;
  };

  const double dt_base = opt.cfl * dx / params.c;
  double t = 0.0;
  size_t next_cp = 0;
  auto snapshot = [&]() {
    FlowState st;
    st.v = ScalarField(grid, t);
    st.u = ScalarField(grid, t);
    st.v.v = v;
    st.u.v = u;
    out.times.push_back(t);
    out.states.push_back(std::move(st));
    out.int_v.push_back(int_excess(v, 1.0));
    out.int_u.push_back(int_excess(u, 0.0));
  };
  while (next_cp < cps.size() && cps[next_cp] <= 1e-14) {
    snapshot();
    ++next_cp;
  }

  std::vector<double> visc0(N), btmp(N);
  while (t < t_end - 1e-12 * (1.0 + t_end)) {
    double target = t_end;
    if (next_cp < cps.size()) target = std::min(target, cps[next_cp]);
    const double dt = std::min(dt_base, target - t);

    // predictor
    dxc(u, rv0);
    pressure_grad(v, ru0);
    faces(v);
    visc_apply(u, visc0);
    for (int j = 0; j < N; ++j) vs[j] = v[j] + dt * rv0[j];
    for (int j = 0; j < N; ++j) btmp[j] = u[j] + dt * ru0[j] + 0.5 * dt * visc0[j];
    visc_solve(dt, btmp, us);

    // corrector
    dxc(us, rv1);
    pressure_grad(vs, ru1);
    for (int j = 0; j < N; ++j) v[j] += 0.5 * dt * (rv0[j] + rv1[j]);
    for (int j = 0; j < N; ++j)
      btmp[j] = u[j] + 0.5 * dt * (ru0[j] + ru1[j]) + 0.5 * dt * visc0[j];
    faces(vs);
    visc_solve(dt, btmp, u);

    t += dt;
    double vmin = v[0];
    for (int j = 0; j < N; ++j) vmin = std::min(vmin, v[j]);
    if (!(vmin > opt.v_floor))
      throw std::runtime_error("solve_p_system: v dropped below the positivity floor");
    for (int j : {0, 1, 2, 3, N - 4, N - 3, N - 2, N - 1})
      if (std::abs(v[j] - 1.0) > opt.boundary_threshold ||
          std::abs(u[j]) > opt.boundary_threshold)
        throw std::runtime_error("solve_p_system: wave reached the domain boundary");

    if (next_cp < cps.size() && std::abs(t - cps[next_cp]) <= 1e-10 * (1.0 + t)) {
      snapshot();
      ++next_cp;
    }
  }
  return out;
}

}  // namespace dwave
