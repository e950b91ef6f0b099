#pragma once

#include <array>
#include <vector>

#include "dwave/model.hpp"

namespace dwave {

struct Matrix2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double max_abs() const;
};

// Leading two-Gaussian profile of the Green's function of the linearized system, t > 0.
Matrix2 gstar(double x, double t, const ModelParams& params);

// Same, convolved with a Gaussian mollifier of standard deviation sigma (closed form).
Matrix2 gstar_mollified(double x, double t, double sigma, const ModelParams& params);

struct QCoeffs {
  Matrix2 Q;
  std::array<std::array<double, 2>, 2> q;  // q[i-1] = l_i Q [r1 r2]
};

// Delta-singular coefficient matrices: k = 0 projects onto the first component,
// k = 1 carries the -1/nu and -c^2/nu couplings.
QCoeffs q_coefficients(int k, const ModelParams& params);

struct Matrix2Field {
  Grid1D grid;
  double t = 0.0;
  std::array<std::vector<double>, 4> e;  // entries (11, 12, 21, 22)

  Matrix2 at(int j) const { return {e[0][j], e[1][j], e[2][j], e[3][j]}; }
};

struct LinearOptions {
  double cfl = 0.8;
  double boundary_threshold = 1e-10;
  double margin = 12.0;
};

struct LinearTrajectory {
  Grid1D grid;
  ModelParams params;
  std::vector<double> times;
  std::vector<std::array<ScalarField, 2>> states;  // (w1, w2) per checkpoint
  std::vector<std::array<double, 2>> mass;         // integrals per checkpoint
};

// Marches the constant-coefficient linearization w_t + A w_x = diag(0, nu) w_xx with
// the same conservative IMEX scheme as the nonlinear solver.
LinearTrajectory linear_evolve(const ScalarField& w1_0, const ScalarField& w2_0,
                               const ModelParams& params, double t_end,
                               const std::vector<double>& checkpoints,
                               const LinearOptions& opt = {});

struct GreensRun {
  Grid1D grid;
  ModelParams params;
  double sigma = 0.0;
  std::vector<double> times;
  std::vector<Matrix2Field> G;       // column-assembled numerical Green's function
  std::vector<Matrix2> mass_matrix;  // integral of each entry per checkpoint
};

// Evolves both mollified-delta columns (Gaussian of std sigma >= 3 dx).
GreensRun numerical_green(const ModelParams& params, double sigma, const Grid1D& grid,
                          double t_end, const std::vector<double>& checkpoints,
                          const LinearOptions& opt = {});

// sup_x max-entry |G_num - G*_sigma - e^{-c^2 t/nu} rho_sigma(x) Q_0| per checkpoint.
std::vector<double> gpwe_residual_series(const GreensRun& run);

// sup_x max-entry of the mollified leading profile, per checkpoint.
std::vector<double> gstar_supnorm_series(const GreensRun& run);

// Off-diagonal size of the diagonalized kernel l_i G [r1 r2], per checkpoint.
std::vector<double> offdiag_supnorm_series(const GreensRun& run);

struct RefinedResidual {
  std::vector<double> with_gamma;     // sup over |x - lambda_{i'} t| <= sqrt(t)
  std::vector<double> without_gamma;
};

// Residual of the diagonalized kernel near the opposite characteristic, with and
// without the first-derivative correction term.
RefinedResidual refined_residual(int i, const GreensRun& run);

}  // namespace dwave
