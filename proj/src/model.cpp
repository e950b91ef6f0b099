#include "dwave/model.hpp"

#include <algorithm>
#include <utility>

namespace dwave {

PressureLaw::PressureLaw(std::function<double(double)> p, std::function<double(double)> dp,
                         std::function<double(double)> d2p, std::string name)
    : p_(std::move(p)), dp_(std::move(dp)), d2p_(std::move(d2p)), name_(std::move(name)) {
  if (!(dp_(1.0) < 0.0))
    throw std::invalid_argument("pressure law: p'(1) must be negative");
  if (d2p_(1.0) == 0.0)
    throw std::invalid_argument("pressure law: p''(1) must be nonzero");
}

PressureLaw PressureLaw::gamma_law(double gamma_p) {
  if (!(gamma_p > 1.0))
    throw std::invalid_argument("gamma_law: exponent must exceed 1");
  auto p = [gamma_p](double v) { return std::pow(v, -gamma_p); };
  auto dp = [gamma_p](double v) { return -gamma_p * std::pow(v, -gamma_p - 1.0); };
  auto d2p = [gamma_p](double v) {
    return gamma_p * (gamma_p + 1.0) * std::pow(v, -gamma_p - 2.0);
  };
  return PressureLaw(p, dp, d2p, "gamma-law");
}

PressureLaw PressureLaw::tabulated(std::function<double(double)> p,
                                   std::function<double(double)> dp,
                                   std::function<double(double)> d2p, std::string name) {
  return PressureLaw(std::move(p), std::move(dp), std::move(d2p), std::move(name));
}

ModelParams derive_params(const PressureLaw& law, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("derive_params: nu must be positive");
  ModelParams mp;
  mp.nu = nu;
  mp.p2 = law.d2p(1.0);
  mp.c = std::sqrt(-law.dp(1.0));
  mp.lambda1 = mp.c;
  mp.lambda2 = -mp.c;
  const double c = mp.c, p2 = mp.p2;
  for (int i = 1; i <= 2; ++i) {
    const double sgn = (i == 1) ? -1.0 : 1.0;  // (-1)^i
    mp.l[i - 1] = {p2 / (4.0 * c) * sgn, p2 / (4.0 * c * c)};
    mp.r[i - 1] = {2.0 * c / p2 * sgn, 2.0 * c * c / p2};
    mp.gamma[i - 1] = sgn * nu / (4.0 * c);
  }
  return mp;
}

Grid1D Grid1D::make(double x_min, double x_max, int n) {
  if (n < 16) throw std::invalid_argument("Grid1D: need at least 16 nodes");
  if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
  Grid1D g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / (n - 1);
  return g;
}

void validate_field(const ScalarField& f, const char* what) {
  if (static_cast<int>(f.v.size()) != f.grid.n)
    throw std::invalid_argument(std::string(what) + ": length does not match grid");
  for (double x : f.v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": non-finite value");
  if (!(f.t >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative time stamp");
}

void validate_state(const FlowState& s, double boundary_threshold) {
  validate_field(s.v, "FlowState.v");
  validate_field(s.u, "FlowState.u");
  if (!s.v.grid.same_as(s.u.grid))
    throw std::invalid_argument("FlowState: v and u on different grids");
  if (s.v.t != s.u.t) throw std::invalid_argument("FlowState: v and u time stamps differ");
  for (double x : s.v.v)
    if (!(x > 0.0)) throw std::invalid_argument("FlowState: v must be positive");
  const int n = s.v.grid.n;
  const int edge = std::max(1, n / 100);
  for (int j = 0; j < n; ++j) {
    if (j >= edge && j < n - edge) continue;
    if (std::abs(s.v[j] - 1.0) > boundary_threshold || std::abs(s.u[j]) > boundary_threshold)
      throw std::invalid_argument("FlowState: data has not decayed at the domain boundary");
  }
}

std::array<ScalarField, 2> to_characteristic(const FlowState& state, const ModelParams& params) {
  const int n = state.v.grid.n;
  std::array<ScalarField, 2> out{ScalarField(state.v.grid, state.t()),
                                 ScalarField(state.v.grid, state.t())};
  for (int i = 0; i < 2; ++i) {
    const auto& l = params.l[i];
    for (int j = 0; j < n; ++j)
      out[i][j] = l[0] * (state.v[j] - 1.0) + l[1] * state.u[j];
  }
  return out;
}

FlowState from_characteristic(const ScalarField& u1, const ScalarField& u2,
                              const ModelParams& params) {
  if (!u1.grid.same_as(u2.grid) || u1.t != u2.t)
    throw std::invalid_argument("from_characteristic: fields must share grid and time");
  FlowState s;
  s.v = ScalarField(u1.grid, u1.t);
  s.u = ScalarField(u1.grid, u1.t);
  for (int j = 0; j < u1.grid.n; ++j) {
    const double dv = u1[j] * params.r[0][0] + u2[j] * params.r[1][0];
    const double uu = u1[j] * params.r[0][1] + u2[j] * params.r[1][1];
    if (!(1.0 + dv > 0.0))
      throw std::runtime_error("from_characteristic: reconstructed v is not positive");
    s.v[j] = 1.0 + dv;
    s.u[j] = uu;
  }
  return s;
}

namespace {

double trapezoid_sum(const std::vector<double>& v, double dx) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
  return s * dx;
}

}  // namespace

WaveMasses masses(const ScalarField& u1, const ScalarField& u2, double boundary_threshold) {
  if (!u1.grid.same_as(u2.grid))
    throw std::invalid_argument("masses: fields on different grids");
  WaveMasses wm;
  wm.m1 = trapezoid_sum(u1.v, u1.grid.dx);
  wm.m2 = trapezoid_sum(u2.v, u2.grid.dx);
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));
  const int n = u1.grid.n;
  const int edge = std::max(1, n / 100);
  wm.boundary_ok = true;
  for (int j = 0; j < n && wm.boundary_ok; ++j) {
    if (j >= edge && j < n - edge) continue;
    if (std::abs(u1[j]) > boundary_threshold || std::abs(u2[j]) > boundary_threshold)
      wm.boundary_ok = false;  // mass truncated by the domain
  }
  return wm;
}

AlphaBeta alpha_beta(int n) {
  if (n < -1) throw std::invalid_argument("alpha_beta: n must be >= -1");
  const double half_pow = std::ldexp(1.0, -(n + 1));  // 2^{-(n+1)}, exact
  return {2.0 - half_pow, 1.5 - half_pow};
}

double psi_n(double x, double t, double lambda, int n) {
  const double a = alpha_beta(n).alpha;
  const double w = x - lambda * (t + 1.0);
  return std::pow(w * w + (t + 1.0), -a / 2.0);
}

double psi_tilde_n(double x, double t, double lambda, int n) {
  const auto ab = alpha_beta(n);
  const double w = std::abs(x - lambda * (t + 1.0));
  return 1.0 / (std::pow(w, ab.alpha) + std::pow(t + 1.0, ab.beta));
}

double Psi_in(double x, double t, int i, int n, const ModelParams& params) {
  const int ip = 3 - i;
  return psi_n(x, t, params.lambda(i), n) + psi_tilde_n(x, t, params.lambda(ip), n);
}

double Theta_alpha(double x, double t, double lambda, double mu, double alpha) {
  if (!(mu > 0.0)) throw std::invalid_argument("Theta_alpha: mu must be positive");
  const double w = x - lambda * (t + 1.0);
  return std::pow(t + 1.0, -alpha / 2.0) * std::exp(-w * w / (mu * (t + 1.0)));
}

}  // namespace dwave
