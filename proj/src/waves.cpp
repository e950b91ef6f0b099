#include "dwave/waves.hpp"

#include <algorithm>
#include <cmath>

#include "dwave/quadrature.hpp"

namespace dwave {

DiffusionWave::DiffusionWave(int family, double mass, const ModelParams& params,
                             double max_mass_ratio)
    : family_(family), mass_(mass), nu_(params.nu), lambda_(params.lambda(family)) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("DiffusionWave: family must be 1 or 2");
  if (std::abs(mass) / nu_ > max_mass_ratio)
    throw std::invalid_argument("DiffusionWave: |M|/nu exceeds the safe amplitude bound");
  m_ = std::expm1(mass / nu_);
}

double DiffusionWave::value(double x, double t) const {
  if (m_ == 0.0) return 0.0;
  const double s = t + 1.0;
  if (!(s > 0.0)) throw std::invalid_argument("DiffusionWave: need t > -1");
  const double zeta = (x - lambda_ * s) / std::sqrt(2.0 * nu_ * s);
  const double bracket = std::sqrt(kPi) + m_ * 0.5 * std::sqrt(kPi) * std::erfc(zeta);
  return std::sqrt(nu_) * m_ * std::exp(-zeta * zeta) / (std::sqrt(2.0 * s) * bracket);
}

ThetaDerivs DiffusionWave::derivs(double x, double t) const {
  ThetaDerivs d;
  d.value = value(x, t);
  if (d.value == 0.0) return d;
  const double s = t + 1.0;
  const double z = x - lambda_ * s;
  const double th = d.value;
  d.dx = (th * th - th * z / s) / nu_;
  d.dxx = (2.0 * th * d.dx - d.dx * z / s - th / s) / nu_;
  d.dt = th * (-0.5 / s + lambda_ * z / (nu_ * s) + z * z / (2.0 * nu_ * s * s)) -
         th * th * lambda_ / nu_ - th * th * z / (2.0 * nu_ * s);
  return d;
}

void DiffusionWave::fill(const Grid1D& grid, double t, std::vector<double>& out) const {
  out.assign(grid.n, 0.0);
  if (m_ == 0.0) return;
  const double s = t + 1.0;
  const double half_width = 13.5 * std::sqrt(2.0 * nu_ * s);
  const double center = lambda_ * s;
  int jlo = static_cast<int>(std::ceil((center - half_width - grid.x_min) / grid.dx));
  int jhi = static_cast<int>(std::floor((center + half_width - grid.x_min) / grid.dx));
  jlo = std::max(jlo, 0);
  jhi = std::min(jhi, grid.n - 1);
  for (int j = jlo; j <= jhi; ++j) out[j] = value(grid.x(j), t);
}

double burgers_residual(int i, const WaveMasses& masses, const ModelParams& params,
                        const Grid1D& grid, double t) {
  const DiffusionWave w(i, masses.m(i), params);
  double sup = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const ThetaDerivs d = w.derivs(grid.x(j), t);
    const double res = d.dt + params.lambda(i) * d.dx + d.value * d.dx - 0.5 * params.nu * d.dxx;
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

double burgers_residual_fd(int i, const WaveMasses& masses, const ModelParams& params,
                           const Grid1D& grid, double t, double h) {
  const DiffusionWave w(i, masses.m(i), params);
  const double ht = h / params.c;
  double sup = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double th = w.value(x, t);
    const double dx1 = (w.value(x + h, t) - w.value(x - h, t)) / (2.0 * h);
    const double dxx = (w.value(x + h, t) - 2.0 * th + w.value(x - h, t)) / (h * h);
    const double dt1 = (w.value(x, t + ht) - w.value(x, t - ht)) / (2.0 * ht);
    const double res = dt1 + params.lambda(i) * dx1 + th * dx1 - 0.5 * params.nu * dxx;
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

double profile_g(double z, double nu) { return -(z / nu) * std::exp(-z * z / (2.0 * nu)); }

double profile_f0(int i, const WaveMasses& masses, double nu, double z) {
  const double m = std::expm1(masses.m(i) / nu);
  if (m == 0.0) return 0.0;
  const double zeta = z / std::sqrt(2.0 * nu);
  const double bracket = std::sqrt(kPi) + m * 0.5 * std::sqrt(kPi) * std::erfc(zeta);
  return std::sqrt(nu / 2.0) * m * std::exp(-zeta * zeta) / bracket;
}

double profile_fn(int i, int n, double nu, double z) {
  if (n < 1) throw std::invalid_argument("profile_fn: n must be >= 1");
  if (i != 1 && i != 2) throw std::invalid_argument("profile_fn: family must be 1 or 2");
  const double w = (i == 1) ? z : -z;
  const double pow2n = std::ldexp(1.0, n);  // 2^n
  const double inv2n = 1.0 / pow2n;
  // integrate until the Gaussian factor drops 1e-22 below its peak on [w, inf)
  const double xi_max = std::sqrt(std::max(w, 0.0) * std::max(w, 0.0) + 2.0 * nu * 51.0) +
                        std::sqrt(nu);
  const double S = std::pow(xi_max - w, inv2n);
  auto integrand = [&](double sigma) {
    const double xi = w + std::pow(sigma, pow2n);
    return pow2n * xi * std::exp(-xi * xi / (2.0 * nu));
  };
  // seed break points at the places where the Gaussian weight concentrates
  std::vector<double> breaks;
  const double rt = std::sqrt(nu);
  for (double xi_b : {-3.0 * rt, -rt, 0.0, rt, 3.0 * rt})
    if (xi_b > w && xi_b < xi_max) breaks.push_back(std::pow(xi_b - w, inv2n));
  SimpsonOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-280;
  return adaptive_simpson(integrand, 0.0, S, breaks, opt);
}

namespace {

// full-line quadrature of a product of profiles, all with Gaussian decay
double profile_integral(const std::function<double(double)>& h, double nu) {
  const double Z = std::sqrt(2.0 * nu) * 11.0;
  const double rt = std::sqrt(nu);
  SimpsonOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-280;
  const double v1 = adaptive_simpson(h, -Z, Z, {-3.0 * rt, 0.0, 3.0 * rt}, opt);
  opt.rel_tol = 3e-8;
  const double v2 = adaptive_simpson(h, -Z, Z, {-3.0 * rt, 0.0, 3.0 * rt}, opt);
  if (std::abs(v1 - v2) > 1e-5 * std::max(std::abs(v1), 1e-300))
    throw std::runtime_error("amplitude_constants: profile quadrature did not converge");
  return v1;
}

}  // namespace

AmplitudeConstants amplitude_constants(const WaveMasses& masses, const ModelParams& params,
                                       int n_max) {
  if (n_max < 0) throw std::invalid_argument("amplitude_constants: n_max must be >= 0");
  const double nu = params.nu, c = params.c;
  AmplitudeConstants ac;
  ac.n_max = n_max;
  for (int k = 0; k < 2; ++k) {
    ac.A[k].assign(n_max + 1, 0.0);
    ac.B[k].assign(n_max + 1, 0.0);
    ac.a[k].assign(n_max + 1, 0.0);
    ac.b[k].assign(n_max + 1, 0.0);
    ac.b_self[k].assign(n_max + 1, 0.0);
    ac.A[k][0] = 0.5;  // xi_{i;0} = theta_i / 2 carries the profile f_{i;0}/2
  }
  const double denomA = nu * std::sqrt(4.0 * kPi * nu * c);
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 1; i <= 2; ++i) {
      const int ip = 3 - i;
      auto f0_ip = [&](double z) { return profile_f0(ip, masses, nu, z); };
      auto f_prev_ip = [&](double z) {
        return (n == 1) ? profile_f0(ip, masses, nu, z) : profile_fn(ip, n - 1, nu, z);
      };
      const double a_in = profile_integral(
          [&](double z) { return f0_ip(z) * f_prev_ip(z); }, nu);
      const double b_in = profile_integral(
          [&](double z) { return profile_g(z, nu) * f0_ip(z); }, nu);
      const double A_prev = ac.A[ip - 1][n - 1];
      const double B_prev = ac.B[ip - 1][n - 1];
      const double A_in = (A_prev * a_in + B_prev * b_in) / denomA;
      const double bs_in = profile_integral(
          [&](double z) { return profile_f0(i, masses, nu, z) * profile_fn(i, n, nu, z); }, nu);
      const double B_in =
          -std::ldexp(1.0, n + 1) * A_in * bs_in / std::sqrt(2.0 * kPi * nu);
      ac.a[i - 1][n] = a_in;
      ac.b[i - 1][n] = b_in;
      ac.b_self[i - 1][n] = bs_in;
      ac.A[i - 1][n] = A_in;
      ac.B[i - 1][n] = B_in;
    }
  }
  return ac;
}

}  // namespace dwave
