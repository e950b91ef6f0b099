#pragma once

#include <limits>
#include <vector>

#include "dwave/cascade.hpp"
#include "dwave/model.hpp"
#include "dwave/pde.hpp"

namespace dwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log-intercept of the fit against log(t+1)
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int count = 0;
};

// Least squares of log(value) against log(t+1) over the window [t_lo, t_hi].
// Needs at least 6 samples in the window and positive values.
DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                       double t_lo, double t_hi);

// L^p norm by grid trapezoid (p = kInf gives the grid max).
double lp_norm(const ScalarField& f, double p);

struct ProbeSpec {
  enum class Mode { fixed, characteristic };
  Mode mode = Mode::fixed;
  double x0 = 0.0;  // offset (fixed location, or offset along the characteristic)
  int family = 1;   // for characteristic mode: x = lambda_i (t+1) + x0
};

// Linear interpolation of the field at the probe location; throws if outside the grid.
double probe_field(const ScalarField& f, const ProbeSpec& spec, const ModelParams& params);

std::vector<double> probe_series(const std::vector<ScalarField>& fields, const ProbeSpec& spec,
                                 const ModelParams& params);

// 4th-order central first derivative of a tabulated field (2nd-order one-sided fallback
// at the first/last interior node, zero at the ends).
std::vector<double> deriv4(const std::vector<double>& f, double dx);

// Expansion term u_{i;k} at one checkpoint of the hierarchy:
//   u_{i;1} = xi_{i;1} + gamma_{i'} d_x theta_{i'}   (analytic derivative)
//   u_{i;k} = xi_{i;k} + gamma_{i'} d_x xi_{i';k-1}  (k >= 2, differenced)
std::array<ScalarField, 2> expansion_term(const WaveHierarchy& h, int cp, int k);

// u_i - theta_i - sum_{k=1..n} u_{i;k} at one checkpoint (n = 0 gives u_i - theta_i).
std::array<ScalarField, 2> remainder_fields(const Trajectory& traj, const WaveHierarchy& h,
                                            int cp, int n);

// Same but subtracting the bare levels xi_{i;k} (the corollary combination).
std::array<ScalarField, 2> remainder_fields_xi(const Trajectory& traj, const WaveHierarchy& h,
                                               int cp, int n);

struct RemainderSeries {
  int n = 0;
  std::vector<double> times;
  std::vector<std::array<ScalarField, 2>> v;          // remainder fields
  std::vector<std::array<double, 2>> l1, l2, linf;    // norms per checkpoint/family
  std::vector<std::array<double, 2>> normalized_sup;  // sup_x |v_i| / Psi_{i;n}
  std::vector<std::array<double, 2>> origin;          // |v_i(0, t)|
};

// Full remainder diagnostics; trajectory and hierarchy must share grid and checkpoints.
RemainderSeries remainder(const Trajectory& traj, const WaveHierarchy& h, int n);

struct CollapseFit {
  std::vector<double> times;
  std::vector<double> A, B;          // fitted amplitudes per checkpoint
  std::vector<double> sup_residual;  // sup over the fit window of the rescaled mismatch
};

// Similarity-rescaled least-squares fit of xi_{i;n} onto span{f_{i;n}, g} over
// z in [z_min(t, K), z_max]; checkpoints with t < t_min are skipped.
CollapseFit profile_collapse(const WaveHierarchy& h, int i, int n, double K,
                             double t_min = 10.0, double z_max = 8.0, double dz = 0.05);

}  // namespace dwave
