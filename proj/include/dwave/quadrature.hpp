#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dwave/model.hpp"

namespace dwave {

// Composite trapezoid of uniformly sampled values.
double trapezoid(const std::vector<double>& v, double dx);

inline double trapezoid(const ScalarField& f) { return trapezoid(f.v, f.grid.dx); }

struct SimpsonOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 48;
};

// Adaptive Simpson on [a, b]. Deterministic: the refinement order is fixed.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& opt = {});

// Same, but the interval is pre-split at the given interior break points
// (used to seed narrow interior peaks the global estimate would miss).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, const SimpsonOptions& opt = {});

// Composite Simpson with a fixed odd node count (n >= 3).
double fixed_simpson(const std::function<double(double)>& f, double a, double b, int n);

// Advected heat-kernel convolution, normalized so that the kernel has unit mass:
//   (1/sqrt(2 pi nu tau)) \int exp(-(x - y - lambda tau)^2 / (2 nu tau)) h(y) dy.
// Evaluated with the substitution y = x - lambda tau + sqrt(2 nu tau) rho, which is
// uniformly well conditioned down to tau -> 0.
double heat_convolve(const std::function<double(double)>& h, double lambda, double nu,
                     double x, double tau, int n_rho = 2001, double rho_max = 8.7);

// \int d_y[(t-s)^{-1/2} exp(-(x-y-lambda(t-s))^2/(2 nu (t-s)))] f(y, s) dy via the same
// substitution; smooth in s up to s = t.
double heat_kernel_dy_convolve(const std::function<double(double, double)>& f, double lambda,
                               double nu, double x, double t, double s, int n_rho = 2001,
                               double rho_max = 8.7);

}  // namespace dwave
