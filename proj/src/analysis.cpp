#include "dwave/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "dwave/quadrature.hpp"
#include "dwave/waves.hpp"

namespace dwave {

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                       double t_lo, double t_hi) {
  if (times.size() != values.size())
    throw std::invalid_argument("fit_power_law: size mismatch");
  if (!(t_lo < t_hi)) throw std::invalid_argument("fit_power_law: need t_lo < t_hi");
  std::vector<double> lx, ly;
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_lo || times[k] > t_hi) continue;
    if (!(values[k] > 0.0))
      throw std::invalid_argument("fit_power_law: non-positive value in window");
    lx.push_back(std::log(times[k] + 1.0));
    ly.push_back(std::log(values[k]));
  }
  const int m = static_cast<int>(lx.size());
  if (m < 6) throw std::invalid_argument("fit_power_law: fewer than 6 samples in window");
  double sx = 0.0, sy = 0.0;
  for (int k = 0; k < m; ++k) {
    sx += lx[k];
    sy += ly[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int k = 0; k < m; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (int k = 0; k < m; ++k) {
    const double e = ly[k] - (fit.intercept + fit.exponent * lx[k]);
    ss_res += e * e;
  }
  fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.count = m;
  return fit;
}

double lp_norm(const ScalarField& f, double p) {
  if (p == kInf) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  std::vector<double> w(f.v.size());
  for (size_t j = 0; j < f.v.size(); ++j) w[j] = std::pow(std::abs(f.v[j]), p);
  return std::pow(trapezoid(w, f.grid.dx), 1.0 / p);
}

double probe_field(const ScalarField& f, const ProbeSpec& spec, const ModelParams& params) {
  double x = spec.x0;
  if (spec.mode == ProbeSpec::Mode::characteristic)
    x = params.lambda(spec.family) * (f.t + 1.0) + spec.x0;
  const Grid1D& g = f.grid;
  if (x < g.x_min || x > g.x_max)
    throw std::invalid_argument("probe_field: probe location outside the grid");
  const double pos = (x - g.x_min) / g.dx;
  const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, g.n - 2);
  const double w = pos - j;
  return (1.0 - w) * f.v[j] + w * f.v[j + 1];
}

std::vector<double> probe_series(const std::vector<ScalarField>& fields, const ProbeSpec& spec,
                                 const ModelParams& params) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(probe_field(f, spec, params));
  return out;
}

std::vector<double> deriv4(const std::vector<double>& f, double dx) {
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

std::array<ScalarField, 2> expansion_term(const WaveHierarchy& h, int cp, int k) {
  if (k < 1 || k > h.n_max) throw std::invalid_argument("expansion_term: level out of range");
  const double t = h.times[cp];
  std::array<ScalarField, 2> out{ScalarField(h.grid, t), ScalarField(h.grid, t)};
  for (int i = 1; i <= 2; ++i) {
    const int ip = 3 - i;
    const double gam = h.params.gamma_i(ip);
    auto& f = out[i - 1];
    f.v = h.xi_field(cp, i, k).v;
    if (k == 1) {
      const DiffusionWave wp(ip, h.masses.m(ip), h.params);
      for (int j = 0; j < h.grid.n; ++j) f.v[j] += gam * wp.dx(h.grid.x(j), t);
    } else {
      const auto d = deriv4(h.xi_field(cp, ip, k - 1).v, h.grid.dx);
      for (int j = 0; j < h.grid.n; ++j) f.v[j] += gam * d[j];
    }
  }
  return out;
}

namespace {

std::array<ScalarField, 2> remainder_impl(const Trajectory& traj, const WaveHierarchy& h,
                                          int cp, int n, bool theorem_combination) {
  if (!traj.grid.same_as(h.grid))
    throw std::invalid_argument("remainder: trajectory and hierarchy grids differ");
  if (cp >= static_cast<int>(traj.times.size()) || cp >= static_cast<int>(h.times.size()))
    throw std::invalid_argument("remainder: checkpoint out of range");
  if (std::abs(traj.times[cp] - h.times[cp]) > 1e-9 * (1.0 + h.times[cp]))
    throw std::invalid_argument("remainder: checkpoint times differ");
  if (n > h.n_max) throw std::invalid_argument("remainder: hierarchy depth too small");
  auto ui = to_characteristic(traj.states[cp], h.params);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < h.grid.n; ++j) ui[i].v[j] -= h.theta[cp][i].v[j];
  for (int k = 1; k <= n; ++k) {
    if (theorem_combination) {
      const auto term = expansion_term(h, cp, k);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < h.grid.n; ++j) ui[i].v[j] -= term[i].v[j];
    } else {
      for (int i = 1; i <= 2; ++i)
        for (int j = 0; j < h.grid.n; ++j) ui[i - 1].v[j] -= h.xi_field(cp, i, k).v[j];
    }
  }
  return ui;
}

}  // namespace

std::array<ScalarField, 2> remainder_fields(const Trajectory& traj, const WaveHierarchy& h,
                                            int cp, int n) {
  return remainder_impl(traj, h, cp, n, true);
}

std::array<ScalarField, 2> remainder_fields_xi(const Trajectory& traj, const WaveHierarchy& h,
                                               int cp, int n) {
  return remainder_impl(traj, h, cp, n, false);
}

RemainderSeries remainder(const Trajectory& traj, const WaveHierarchy& h, int n) {
  if (traj.times.size() != h.times.size())
    throw std::invalid_argument("remainder: checkpoint counts differ");
  RemainderSeries rs;
  rs.n = n;
  rs.times = h.times;
  const ProbeSpec origin{ProbeSpec::Mode::fixed, 0.0, 1};
  for (size_t cp = 0; cp < h.times.size(); ++cp) {
    auto v = remainder_fields(traj, h, static_cast<int>(cp), n);
    std::array<double, 2> a1{}, a2{}, ai{}, ns{}, org{};
    for (int i = 1; i <= 2; ++i) {
      const auto& f = v[i - 1];
      a1[i - 1] = lp_norm(f, 1.0);
      a2[i - 1] = lp_norm(f, 2.0);
      ai[i - 1] = lp_norm(f, kInf);
      double sup = 0.0;
      for (int j = 0; j < h.grid.n; ++j) {
        const double w = Psi_in(h.grid.x(j), f.t, i, n, h.params);
        sup = std::max(sup, std::abs(f.v[j]) / w);
      }
      ns[i - 1] = sup;
      org[i - 1] = std::abs(probe_field(f, origin, h.params));
    }
    rs.l1.push_back(a1);
    rs.l2.push_back(a2);
    rs.linf.push_back(ai);
    rs.normalized_sup.push_back(ns);
    rs.origin.push_back(org);
    rs.v.push_back(std::move(v));
  }
  return rs;
}

CollapseFit profile_collapse(const WaveHierarchy& h, int i, int n, double K, double t_min,
                             double z_max, double dz) {
  if (n < 1 || n > h.n_max) throw std::invalid_argument("profile_collapse: level out of range");
  CollapseFit out;
  const double nu = h.params.nu;
  const double alpha_prev = alpha_beta(n - 1).alpha;
  for (size_t cp = 0; cp < h.times.size(); ++cp) {
    const double t = h.times[cp];
    if (t < t_min) continue;
    const double rt = std::sqrt(t + 1.0);
    const double lam = h.params.lambda(i);
    // restriction (-1)^{i-1} x >= -K in the reflected variable w = (-1)^{i-1} z:
    // both families give w >= (-K - c(t+1))/sqrt(t+1)
    const double w_min = (-K - h.params.c * (t + 1.0)) / rt;
    const ScalarField& field = h.xi_field(static_cast<int>(cp), i, n);
    const double scale = std::pow(t + 1.0, alpha_prev / 2.0);
    double sff = 0.0, sfg = 0.0, sgg = 0.0, sfy = 0.0, sgy = 0.0;
    std::vector<double> zs, ys, fs, gs;
    for (double w = w_min; w <= z_max; w += dz) {
      const double z = (i == 1) ? w : -w;
      const double x = lam * (t + 1.0) + z * rt;
      if (x < h.grid.x_min || x > h.grid.x_max) continue;
      ProbeSpec p{ProbeSpec::Mode::fixed, x, i};
      const double y = scale * probe_field(field, p, h.params);
      const double fv = profile_fn(i, n, nu, z);
      const double gv = profile_g(z, nu);
      zs.push_back(z);
      ys.push_back(y);
      fs.push_back(fv);
      gs.push_back(gv);
      sff += fv * fv;
      sfg += fv * gv;
      sgg += gv * gv;
      sfy += fv * y;
      sgy += gv * y;
    }
    const double det = sff * sgg - sfg * sfg;
    if (!(std::abs(det) > 1e-12 * std::max(sff * sgg, 1e-300)))
      throw std::runtime_error("profile_collapse: basis nearly collinear on the window");
    const double A = (sgg * sfy - sfg * sgy) / det;
    const double B = (sff * sgy - sfg * sfy) / det;
    double sup = 0.0;
    for (size_t k = 0; k < zs.size(); ++k)
      sup = std::max(sup, std::abs(ys[k] - A * fs[k] - B * gs[k]));
    out.times.push_back(t);
    out.A.push_back(A);
    out.B.push_back(B);
    out.sup_residual.push_back(sup);
  }
  return out;
}

}  // namespace dwave
