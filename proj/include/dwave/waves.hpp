#pragma once

#include <array>
#include <vector>

#include "dwave/model.hpp"

namespace dwave {

struct ThetaDerivs {
  double value = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double dxx = 0.0;
};

// Self-similar solution of the convective viscous Burgers equation with point mass
// M_i placed at t = -1, in closed form. The bracket is evaluated through expm1 and
// the scaled complementary error function, so the far field stays cancellation-free.
// Evaluators are pure; derivatives are analytic (no differencing).
class DiffusionWave {
 public:
  DiffusionWave(int family, double mass, const ModelParams& params,
                double max_mass_ratio = 0.5);

  double value(double x, double t) const;
  ThetaDerivs derivs(double x, double t) const;
  double dx(double x, double t) const { return derivs(x, t).dx; }
  double dt(double x, double t) const { return derivs(x, t).dt; }

  // Samples the wave on a grid, skipping nodes where the Gaussian factor is below
  // ~1e-80 of its peak (those entries are zeroed).
  void fill(const Grid1D& grid, double t, std::vector<double>& out) const;

  int family() const { return family_; }
  double mass() const { return mass_; }
  double lambda() const { return lambda_; }

 private:
  int family_;
  double mass_;
  double nu_;
  double lambda_;
  double m_;  // expm1(mass / nu)
};

// Sup over the grid of |theta_t + lambda theta_x + theta theta_x - (nu/2) theta_xx|
// with analytic derivatives; rounding-level for the closed form.
double burgers_residual(int i, const WaveMasses& masses, const ModelParams& params,
                        const Grid1D& grid, double t);

// Same residual with 2nd-order central differences of the closed form (step `h` in x,
// `h/c` in t); used to exhibit the scheme-order baseline the analytic path beats.
double burgers_residual_fd(int i, const WaveMasses& masses, const ModelParams& params,
                           const Grid1D& grid, double t, double h);

// g(z) = -(z/nu) exp(-z^2/(2 nu)).
double profile_g(double z, double nu);

// Similarity profile of theta_i: theta_i(x,t) = (t+1)^{-1/2} f_{i;0}((x-lambda_i(t+1))/sqrt(t+1)).
double profile_f0(int i, const WaveMasses& masses, double nu, double z);

// Singular-kernel profile f_{i;n}(z) = int_{w}^{inf} (xi-w)^{-(1-1/2^n)} xi exp(-xi^2/(2nu)) dxi,
// w = (-1)^{i-1} z, computed after the substitution xi = w + sigma^{2^n} that removes the
// endpoint singularity. Relative accuracy ~1e-9.
double profile_fn(int i, int n, double nu, double z);

// Amplitude constants of the similarity decomposition
//   xi_{i;n} ~ (t+1)^{-alpha_{n-1}/2} [A_{i;n} f_{i;n}(z) + B_{i;n} g(z)],
// built by the level recursion seeded with (A_{i;0}, B_{i;0}) = (1/2, 0).
// B values are leading-order only (higher-order-in-eps remainder).
struct AmplitudeConstants {
  int n_max = 0;
  // index [family-1][n] with n = 0..n_max
  std::array<std::vector<double>, 2> A, B;
  // quadrature constants, defined for n >= 1 (index n, slot 0 unused)
  std::array<std::vector<double>, 2> a, b, b_self;

  double A_of(int i, int n) const { return A[i - 1][n]; }
  double B_of(int i, int n) const { return B[i - 1][n]; }
};

AmplitudeConstants amplitude_constants(const WaveMasses& masses, const ModelParams& params,
                                       int n_max);

}  // namespace dwave
