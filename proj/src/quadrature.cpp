#include "dwave/quadrature.hpp"

#include <algorithm>

namespace dwave {

double trapezoid(const std::vector<double>& v, double dx) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
  return s * dx;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth,
                   const SimpsonOptions& opt) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= opt.max_depth || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, opt) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, opt);
}

double simpson_interval(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& opt) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(whole));
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 0, opt);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& opt) {
  if (!(b > a)) return 0.0;
  return simpson_interval(f, a, b, opt);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, const SimpsonOptions& opt) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double sum = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k)
    sum += simpson_interval(f, pts[k], pts[k + 1], opt);
  return sum;
}

double fixed_simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 3) throw std::invalid_argument("fixed_simpson: need n >= 3");
  if (n % 2 == 0) ++n;
  const double h = (b - a) / (n - 1);
  double s = f(a) + f(b);
  for (int j = 1; j < n - 1; ++j) s += f(a + j * h) * (j % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double heat_convolve(const std::function<double(double)>& h, double lambda, double nu,
                     double x, double tau, int n_rho, double rho_max) {
  if (!(tau >= 0.0)) throw std::invalid_argument("heat_convolve: tau must be >= 0");
  if (tau == 0.0) return h(x);
  const double w = std::sqrt(2.0 * nu * tau);
  auto g = [&](double rho) { return std::exp(-rho * rho) * h(x - lambda * tau + w * rho); };
  return fixed_simpson(g, -rho_max, rho_max, n_rho) / std::sqrt(kPi);
}

double heat_kernel_dy_convolve(const std::function<double(double, double)>& f, double lambda,
                               double nu, double x, double t, double s, int n_rho,
                               double rho_max) {
  const double tau = t - s;
  if (!(tau >= 0.0)) throw std::invalid_argument("heat_kernel_dy_convolve: need s <= t");
  if (tau < 1e-14) {
    // limit value -sqrt(2 pi nu) d_x f(x, s)
    const double h = 1e-5 * (1.0 + std::abs(x));
    return -std::sqrt(2.0 * kPi * nu) * (f(x + h, s) - f(x - h, s)) / (2.0 * h);
  }
  const double w = std::sqrt(2.0 * nu * tau);
  auto g = [&](double rho) {
    return rho * std::exp(-rho * rho) * f(x - lambda * tau + w * rho, s);
  };
  return -2.0 / std::sqrt(tau) * fixed_simpson(g, -rho_max, rho_max, n_rho);
}

}  // namespace dwave
