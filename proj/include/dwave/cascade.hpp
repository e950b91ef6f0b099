#pragma once

#include <array>
#include <functional>
#include <vector>

#include "dwave/model.hpp"
#include "dwave/waves.hpp"

namespace dwave {

// Observer invoked after the initial state and after every accepted step.
// `xi_levels` is indexed k = (n-1)*2 + (i-1) for level n >= 1, family i; `Xi_fields`
// holds the two unified fields when enabled, else is empty. Views are valid only
// during the call.
using CascadeObserver = std::function<void(double t, const std::vector<std::vector<double>>& xi_levels,
                                           const std::vector<std::vector<double>>& Xi_fields)>;

struct CascadeOptions {
  double cfl = 0.8;                  // dt = cfl * dx / c
  double boundary_threshold = 1e-10;
  double margin = 12.0;              // required domain slack in units of sqrt(t_end+1)
  bool with_Xi = false;
  CascadeObserver observer;
};

// Checkpointed hierarchy of higher-order diffusion waves. All 2*n_max level fields are
// marched together (level n forcing uses level n-1 of the opposite family at the same
// stage); theta enters as an analytically evaluated coefficient, never time-discretized.
struct WaveHierarchy {
  Grid1D grid;
  ModelParams params;
  WaveMasses masses;
  int n_max = 0;
  bool has_Xi = false;
  std::vector<double> times;
  std::vector<std::array<ScalarField, 2>> theta;               // per checkpoint, per family
  std::vector<std::vector<std::array<ScalarField, 2>>> xi;     // [cp][n-1][i-1]
  std::vector<std::array<ScalarField, 2>> Xi;                  // per checkpoint (if has_Xi)
  std::vector<std::vector<double>> xi_mass;                    // [cp][(n-1)*2+(i-1)]
  std::vector<std::array<double, 2>> Xi_mass;

  const ScalarField& xi_field(int cp, int i, int n) const { return xi[cp][n - 1][i - 1]; }
};

WaveHierarchy solve_cascade(const WaveMasses& masses, const ModelParams& params,
                            const Grid1D& grid, int n_max, double t_end,
                            const std::vector<double>& checkpoints,
                            const CascadeOptions& opt = {});

// Directly solves the coupled two-field system the level sums satisfy; returns a
// hierarchy with n_max = 0 and the Xi fields populated.
WaveHierarchy solve_Xi(const WaveMasses& masses, const ModelParams& params, const Grid1D& grid,
                       double t_end, const std::vector<double>& checkpoints,
                       const CascadeOptions& opt = {});

struct DuhamelOptions {
  int n_s = 512;      // panels of the composite Simpson rule in s
  int n_rho = 2001;   // nodes of the Gauss-weighted y quadrature
  double rho_max = 8.7;
};

// Heat-kernel Duhamel value
//   -(2 pi nu)^{-1/2} int_0^t int (t-s)^{-1/2} e^{-(x-y-lambda(t-s))^2/(2 nu (t-s))} d_y f(y,s) dy ds,
// with the derivative moved onto the kernel, so only values of `forcing` are needed.
// Slow by design; meant as an independent cross-check of the march at isolated points.
double duhamel_oracle(const std::function<double(double, double)>& forcing, double lambda,
                      double nu, double x, double t, const DuhamelOptions& opt = {});

// Smooth space-time test function with the analytic ingredients the decomposition needs.
struct SmoothSpaceTimeFn {
  std::function<double(double, double)> value;
  std::function<double(double, double)> ddx;
  std::function<double(double, double)> lop;  // (d_t + lambda' d_x - (nu/2) d_x^2) f
};

// Exact two-speed decomposition of the kernel convolution: evaluates both sides by
// quadrature and returns |LHS - RHS|. Requires lambda != lambda' and t >= 1.
double heat_decomposition_residual(const SmoothSpaceTimeFn& f, double lambda, double lambda_p,
                                   double nu, double x, double t, const DuhamelOptions& opt = {});

// Geometric checkpoint schedule t0 * r^k clipped to (0, t_end], with t_end appended.
std::vector<double> geometric_checkpoints(double t0, double ratio, double t_end);

}  // namespace dwave
