#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dwave/model.hpp"
#include "dwave/quadrature.hpp"
#include "dwave/waves.hpp"

using namespace dwave;

namespace {

ModelParams default_params() { return derive_params(PressureLaw::gamma_law(1.4), 1.0); }

WaveMasses make_masses(double m1, double m2) {
  WaveMasses wm;
  wm.m1 = m1;
  wm.m2 = m2;
  wm.eps = std::max(std::abs(m1), std::abs(m2));
  return wm;
}

}  // namespace

TEST_CASE("zero mass gives the zero wave") {
  const ModelParams p = default_params();
  const DiffusionWave w(1, 0.0, p);
  for (double t : {0.0, 5.0})
    for (double x : {-3.0, 0.0, 10.0}) {
      CHECK(w.value(x, t) == 0.0);
      CHECK(w.dx(x, t) == 0.0);
    }
}

TEST_CASE("on-characteristic value at t = 0 matches the direct evaluation") {
  const ModelParams p = default_params();
  const DiffusionWave w(1, 0.01, p);
  const double th = w.value(p.lambda1, 0.0);
  CHECK(th == doctest::Approx(3.98939e-3).epsilon(2e-5));
  // leading order M / sqrt(2 pi nu)
  CHECK(th == doctest::Approx(0.01 / std::sqrt(2.0 * kPi)).epsilon(2e-3));
}

TEST_CASE("mass cap rejected") {
  const ModelParams p = default_params();
  CHECK_THROWS_AS(DiffusionWave(1, 0.51, p), std::invalid_argument);
  CHECK_NOTHROW(DiffusionWave(1, 0.5, p));
}

TEST_CASE("wave mass is conserved in time") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.04, -0.03);
  const Grid1D g = Grid1D::make(-260.0, 260.0, 10401);
  std::vector<double> buf;
  for (int i = 1; i <= 2; ++i) {
    const DiffusionWave w(i, wm.m(i), p);
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      w.fill(g, t, buf);
      CHECK(trapezoid(buf, g.dx) == doctest::Approx(wm.m(i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed form satisfies the convective Burgers equation to rounding") {
  const ModelParams p = default_params();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ut(0.1, 100.0), uo(-8.0, 8.0);
  for (int i = 1; i <= 2; ++i) {
    const DiffusionWave w(i, i == 1 ? 0.05 : -0.04, p);
    double sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = ut(rng);
      const double x = p.lambda(i) * (t + 1.0) + uo(rng) * std::sqrt(2.0 * (t + 1.0));
      const ThetaDerivs d = w.derivs(x, t);
      sup = std::max(sup, std::abs(d.dt + p.lambda(i) * d.dx + d.value * d.dx -
                                   0.5 * p.nu * d.dxx));
    }
    CHECK(sup < 1e-11);
  }
}

TEST_CASE("grid-level residual with analytic derivatives stays at rounding") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.05, 0.05);
  const Grid1D g = Grid1D::make(-60.0, 60.0, 2401);
  CHECK(burgers_residual(1, wm, p, g, 10.0) < 1e-12);
  CHECK(burgers_residual(1, make_masses(0.0, 0.0), p, g, 10.0) == 0.0);
}

TEST_CASE("finite-difference residual converges at second order") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.05, 0.05);
  const Grid1D g = Grid1D::make(-60.0, 60.0, 1201);
  const double r1 = burgers_residual_fd(1, wm, p, g, 10.0, 0.04);
  const double r2 = burgers_residual_fd(1, wm, p, g, 10.0, 0.02);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("similarity profile g") {
  CHECK(profile_g(0.0, 1.0) == 0.0);
  CHECK(profile_g(1.0, 1.0) == doctest::Approx(-std::exp(-0.5)).epsilon(1e-14));
  for (double z : {0.3, 1.7, 4.0})
    CHECK(profile_g(-z, 1.0) == doctest::Approx(-profile_g(z, 1.0)).epsilon(1e-14));
  // nu scaling
  CHECK(profile_g(2.0, 2.0) == doctest::Approx(-(2.0 / 2.0) * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("theta collapses onto f_{i;0} exactly") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.03, -0.02);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 200.0), uz(-8.0, 8.0);
  for (int i = 1; i <= 2; ++i) {
    const DiffusionWave w(i, wm.m(i), p);
    double sup = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double t = ut(rng);
      const double z = uz(rng);
      const double x = p.lambda(i) * (t + 1.0) + z * std::sqrt(t + 1.0);
      sup = std::max(sup,
                     std::abs(std::sqrt(t + 1.0) * w.value(x, t) - profile_f0(i, wm, p.nu, z)));
    }
    CHECK(sup < 1e-12);
  }
}

TEST_CASE("profile f_{i;0} carries the wave mass") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.05, 0.02);
  for (int i = 1; i <= 2; ++i) {
    auto f = [&](double z) { return profile_f0(i, wm, p.nu, z); };
    const double v = adaptive_simpson(f, -45.0, 45.0, std::vector<double>{-3.0, 0.0, 3.0});
    CHECK(v == doctest::Approx(wm.m(i)).epsilon(1e-9));
  }
  CHECK(profile_f0(1, make_masses(0.0, 0.1), 1.0, 0.7) == 0.0);
}

TEST_CASE("singular profile at the origin matches the Gamma identity") {
  // int_0^inf xi^{1/2} e^{-xi^2/2} dxi = 2^{-1/4} Gamma(3/4)
  const double expect = std::pow(2.0, -0.25) * std::tgamma(0.75);
  CHECK(profile_fn(1, 1, 1.0, 0.0) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(profile_fn(2, 1, 1.0, 0.0) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(expect == doctest::Approx(1.0305).epsilon(1e-4));
}

TEST_CASE("singular profile tails") {
  for (int n : {1, 2}) {
    // forward ray: Gaussian-type decay, d log f / d z^2 -> -1/(2 nu)
    for (double nu : {1.0, 0.7}) {
      const double z1 = 6.0 * std::sqrt(nu), z2 = 8.0 * std::sqrt(nu);
      const double f1 = profile_fn(1, n, nu, z1);
      const double f2 = profile_fn(1, n, nu, z2);
      const double slope = (std::log(f2) - std::log(f1)) / (z2 * z2 - z1 * z1);
      CHECK(slope == doctest::Approx(-0.5 / nu).epsilon(0.03));
    }
    // backward ray: |f| |z|^{alpha_{n-1}} approaches a positive constant
    const double a_prev = alpha_beta(n - 1).alpha;
    const double c1 = std::abs(profile_fn(1, n, 1.0, -30.0)) * std::pow(30.0, a_prev);
    const double c2 = std::abs(profile_fn(1, n, 1.0, -60.0)) * std::pow(60.0, a_prev);
    CHECK(c1 > 0.0);
    CHECK(c2 / c1 == doctest::Approx(1.0).epsilon(0.05));
    // moment-expansion limit (1 - 1/2^n) nu sqrt(2 pi nu), approached from below in |z|
    const double lim = (1.0 - std::ldexp(1.0, -n)) * std::sqrt(2.0 * kPi);
    CHECK(c2 == doctest::Approx(lim).epsilon(0.05));
    // the signed tail is negative
    CHECK(profile_fn(1, n, 1.0, -40.0) < 0.0);
    // family 2 mirrors family 1
    CHECK(profile_fn(2, n, 1.0, 5.0) ==
          doctest::Approx(profile_fn(1, n, 1.0, -5.0)).epsilon(1e-10));
  }
}

TEST_CASE("integral representation of f_{1;1} along the characteristic") {
  // -(t+1)^{-3/4}/(nu sqrt(2c)) f_{1;1}((x-c(t+1))/sqrt(t+1))
  //   = d_x int_{-1}^inf (t+1)^{-1/2} (s+1)^{-1/2} exp(-(x-c(t-s)+c(s+1))^2/(2nu(t+1))) ds
  const ModelParams p = default_params();
  const double nu = p.nu, c = p.c, t = 10.0;
  for (double off : {0.0, 2.0, -3.0}) {
    const double x = c * (t + 1.0) + off;
    auto integrand = [&](double sig) {  // substitution s + 1 = sig^2
      const double A = x - c * (t + 1.0) + 2.0 * c * sig * sig;
      return 2.0 * std::pow(t + 1.0, -0.5) * (-A / (nu * (t + 1.0))) *
             std::exp(-A * A / (2.0 * nu * (t + 1.0)));
    };
    const double sig_max =
        std::sqrt((std::abs(x - c * (t + 1.0)) + 15.0 * std::sqrt(nu * (t + 1.0))) / (2.0 * c));
    SimpsonOptions opt;
    opt.rel_tol = 1e-11;
    const double rhs = adaptive_simpson(integrand, 0.0, sig_max, {0.5 * sig_max}, opt);
    const double z = (x - c * (t + 1.0)) / std::sqrt(t + 1.0);
    const double lhs =
        -std::pow(t + 1.0, -0.75) / (nu * std::sqrt(2.0 * c)) * profile_fn(1, 1, nu, z);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
  }
}

TEST_CASE("amplitude constants vanish with the masses and scale quadratically") {
  const ModelParams p = default_params();
  const AmplitudeConstants zero = amplitude_constants(make_masses(0.0, 0.0), p, 2);
  for (int i = 1; i <= 2; ++i)
    for (int n = 1; n <= 2; ++n) {
      CHECK(zero.A_of(i, n) == 0.0);
      CHECK(zero.B_of(i, n) == 0.0);
    }

  const AmplitudeConstants full = amplitude_constants(make_masses(0.02, 0.02), p, 2);
  const AmplitudeConstants half = amplitude_constants(make_masses(0.02, 0.01), p, 2);
  CHECK(half.a[0][1] / full.a[0][1] == doctest::Approx(0.25).epsilon(0.02));
  CHECK(full.A_of(1, 1) > 0.0);
  CHECK(full.B_of(1, 1) < 0.0);
  // symmetric masses give symmetric constants
  CHECK(full.A_of(1, 1) == doctest::Approx(full.A_of(2, 1)).epsilon(1e-9));
  // level-1 closed form: A_{1;1} = a_{1;1} / (2 nu sqrt(4 pi nu c))
  CHECK(full.A_of(1, 1) ==
        doctest::Approx(full.a[0][1] / (2.0 * p.nu * std::sqrt(4.0 * kPi * p.nu * p.c)))
            .epsilon(1e-12));
  // empirical order: halving both masses shrinks A_{i;2} by ~8 (third order)
  const AmplitudeConstants small = amplitude_constants(make_masses(0.01, 0.01), p, 2);
  CHECK(full.A_of(1, 2) / small.A_of(1, 2) == doctest::Approx(8.0).epsilon(0.05));
}
