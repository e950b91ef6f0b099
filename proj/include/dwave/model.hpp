#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwave {

inline constexpr double kPi = 3.14159265358979323846;

// Barotropic pressure law p(v), v > 0. Valid laws have p'(1) < 0 and p''(1) != 0;
// the factory functions reject anything else.
class PressureLaw {
 public:
  static PressureLaw gamma_law(double gamma_p);
  static PressureLaw tabulated(std::function<double(double)> p,
                               std::function<double(double)> dp,
                               std::function<double(double)> d2p,
                               std::string name = "tabulated");

  double p(double v) const { return p_(v); }
  double dp(double v) const { return dp_(v); }
  double d2p(double v) const { return d2p_(v); }
  const std::string& name() const { return name_; }

 private:
  PressureLaw(std::function<double(double)> p, std::function<double(double)> dp,
              std::function<double(double)> d2p, std::string name);

  std::function<double(double)> p_, dp_, d2p_;
  std::string name_;
};

// Sound speed, eigenstructure and Green's-function correction coefficients of the
// state (v,u) = (1,0). Row vectors l1,l2 and column vectors r1,r2 are biorthogonal.
struct ModelParams {
  double nu = 1.0;        // viscosity
  double c = 0.0;         // sound speed sqrt(-p'(1))
  double p2 = 0.0;        // p''(1)
  double lambda1 = 0.0;   // +c
  double lambda2 = 0.0;   // -c
  std::array<std::array<double, 2>, 2> l{};  // l[i-1]: left row vectors
  std::array<std::array<double, 2>, 2> r{};  // r[i-1]: right column vectors
  std::array<double, 2> gamma{};             // gamma_i = (-1)^i nu/(4c)

  double lambda(int i) const { return i == 1 ? lambda1 : lambda2; }
  double gamma_i(int i) const { return gamma[i - 1]; }
  const std::array<double, 2>& li(int i) const { return l[i - 1]; }
  const std::array<double, 2>& ri(int i) const { return r[i - 1]; }
};

ModelParams derive_params(const PressureLaw& law, double nu);

// Uniform node-centred grid on [x_min, x_max].
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;
  double dx = 0.0;

  static Grid1D make(double x_min, double x_max, int n);
  double x(int j) const { return x_min + j * dx; }
  bool same_as(const Grid1D& o) const {
    return n == o.n && x_min == o.x_min && x_max == o.x_max;
  }
};

struct ScalarField {
  Grid1D grid;
  std::vector<double> v;
  double t = 0.0;

  ScalarField() = default;
  ScalarField(const Grid1D& g, double time) : grid(g), v(g.n, 0.0), t(time) {}
  double& operator[](int j) { return v[j]; }
  double operator[](int j) const { return v[j]; }
};

// Checks that all values are finite and the length matches the grid. Throws otherwise.
void validate_field(const ScalarField& f, const char* what);

struct FlowState {
  ScalarField v;  // specific volume
  ScalarField u;  // velocity

  double t() const { return v.t; }
};

// v > 0 everywhere and |v-1|, |u| below `boundary_threshold` on the outer 1% of nodes.
void validate_state(const FlowState& s, double boundary_threshold = 1e-10);

struct WaveMasses {
  double m1 = 0.0;
  double m2 = 0.0;
  double eps = 0.0;            // max(|m1|, |m2|)
  bool boundary_ok = true;     // false when the data had not decayed at the domain ends

  double m(int i) const { return i == 1 ? m1 : m2; }
};

// Characteristic projections u_i = l_i . (v-1, u)^T, nodewise.
std::array<ScalarField, 2> to_characteristic(const FlowState& state, const ModelParams& params);

// Inverse map (v-1, u)^T = u1 r1 + u2 r2; fails if the reconstructed v is not positive.
FlowState from_characteristic(const ScalarField& u1, const ScalarField& u2,
                              const ModelParams& params);

// Trapezoid masses of the characteristic components at t = 0.
WaveMasses masses(const ScalarField& u1, const ScalarField& u2,
                  double boundary_threshold = 1e-10);

struct AlphaBeta {
  double alpha;
  double beta;
};

// alpha_n = 2 - 2^{-(n+1)}, beta_n = 3/2 - 2^{-(n+1)}, n >= -1.
AlphaBeta alpha_beta(int n);

// Decay weight localized at x = lambda(t+1): [(x-lambda(t+1))^2 + (t+1)]^{-alpha_n/2}.
double psi_n(double x, double t, double lambda, int n);

// Slow-tail weight [|x-lambda(t+1)|^{alpha_n} + (t+1)^{beta_n}]^{-1}.
double psi_tilde_n(double x, double t, double lambda, int n);

// Psi_{i;n} = psi_n(.; lambda_i) + psi_tilde_n(.; lambda_{i'}).
double Psi_in(double x, double t, int i, int n, const ModelParams& params);

// Gaussian envelope (t+1)^{-alpha/2} exp(-(x-lambda(t+1))^2 / (mu(t+1))).
double Theta_alpha(double x, double t, double lambda, double mu, double alpha);

}  // namespace dwave
