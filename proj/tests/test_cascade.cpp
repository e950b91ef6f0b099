#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dwave/analysis.hpp"
#include "dwave/cascade.hpp"
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

Grid1D sized_grid(const ModelParams& p, double t_end, double dx, double margin = 12.0) {
  const double hw = p.c * (t_end + 1.0) + margin * std::sqrt(t_end + 1.0);
  const int half = static_cast<int>(std::ceil(hw / dx));
  return Grid1D::make(-half * dx, half * dx, 2 * half + 1);
}

}  // namespace

TEST_CASE("geometric checkpoint schedule") {
  const auto cps = geometric_checkpoints(1.0, 2.0, 16.0);
  REQUIRE(cps.size() == 5);
  CHECK(cps.front() == doctest::Approx(1.0));
  CHECK(cps.back() == doctest::Approx(16.0));
  const auto cps2 = geometric_checkpoints(1.0, 2.0, 20.0);
  CHECK(cps2.back() == doctest::Approx(20.0));
  CHECK_THROWS_AS(geometric_checkpoints(0.0, 2.0, 5.0), std::invalid_argument);
}

TEST_CASE("zero masses march to identically zero waves") {
  const ModelParams p = default_params();
  const Grid1D g = sized_grid(p, 2.0, 0.1);
  CascadeOptions opt;
  opt.with_Xi = true;
  const WaveHierarchy h = solve_cascade(make_masses(0.0, 0.0), p, g, 2, 2.0, {1.0, 2.0}, opt);
  REQUIRE(h.times.size() == 2);
  for (size_t cp = 0; cp < h.times.size(); ++cp)
    for (int i = 1; i <= 2; ++i) {
      CHECK(lp_norm(h.xi_field(cp, i, 1), kInf) == 0.0);
      CHECK(lp_norm(h.xi_field(cp, i, 2), kInf) == 0.0);
      CHECK(lp_norm(h.Xi[cp][i - 1], kInf) == 0.0);
    }
}

TEST_CASE("level fields keep zero mass and stay nontrivial") {
  const ModelParams p = default_params();
  const Grid1D g = sized_grid(p, 8.0, 0.05);
  const WaveHierarchy h =
      solve_cascade(make_masses(0.05, 0.04), p, g, 2, 8.0, {1.0, 2.0, 4.0, 8.0});
  REQUIRE(h.times.size() == 4);
  for (const auto& cp_mass : h.xi_mass)
    for (double m : cp_mass) CHECK(std::abs(m) < 1e-8);
  CHECK(lp_norm(h.xi_field(3, 1, 1), kInf) > 1e-6);
  CHECK(lp_norm(h.xi_field(3, 1, 2), kInf) > 0.0);
  // hierarchy ordering already at modest times
  CHECK(lp_norm(h.xi_field(3, 1, 2), kInf) < lp_norm(h.xi_field(3, 1, 1), kInf));
}

TEST_CASE("march rejects undersized domains and bad cfl") {
  const ModelParams p = default_params();
  const Grid1D g = Grid1D::make(-10.0, 10.0, 401);
  CHECK_THROWS_AS(solve_cascade(make_masses(0.01, 0.01), p, g, 1, 50.0, {50.0}),
                  std::invalid_argument);
  CascadeOptions opt;
  opt.cfl = 1.7;
  const Grid1D g2 = sized_grid(p, 1.0, 0.1);
  CHECK_THROWS_AS(solve_cascade(make_masses(0.01, 0.01), p, g2, 1, 1.0, {1.0}, opt),
                  std::invalid_argument);
}

TEST_CASE("unified field equals the level sum up to the truncation tail") {
  const ModelParams p = default_params();
  const double T = 20.0;
  const Grid1D g = sized_grid(p, T, 0.05);
  CascadeOptions opt;
  opt.with_Xi = true;
  const WaveHierarchy h = solve_cascade(make_masses(0.04, 0.04), p, g, 3, T, {T}, opt);
  const double denom = lp_norm(h.xi_field(0, 1, 1), kInf);
  std::vector<double> gap;
  for (int m = 1; m <= 3; ++m) {
    double worst = 0.0;
    for (int i = 1; i <= 2; ++i) {
      ScalarField diff = h.Xi[0][i - 1];
      for (int n = 1; n <= m; ++n)
        for (int j = 0; j < g.n; ++j) diff.v[j] -= h.xi_field(0, i, n).v[j];
      worst = std::max(worst, lp_norm(diff, kInf));
    }
    gap.push_back(worst / denom);
  }
  CHECK(gap[1] < 0.5 * gap[0]);
  CHECK(gap[2] < 0.5 * gap[1]);
  for (const auto& xm : h.Xi_mass) {
    CHECK(std::abs(xm[0]) < 1e-8);
    CHECK(std::abs(xm[1]) < 1e-8);
  }
}

TEST_CASE("duhamel oracle basics") {
  CHECK(duhamel_oracle([](double, double) { return 0.0; }, 1.0, 1.0, 0.5, 2.0,
                       DuhamelOptions{64, 201, 8.7}) == 0.0);
  // Chapman-Kolmogorov for the advected kernel
  const double nu = 1.0, lam = 1.3;
  auto G = [&](double x, double t) {
    return std::exp(-(x - lam * t) * (x - lam * t) / (2.0 * nu * t)) /
           std::sqrt(2.0 * kPi * nu * t);
  };
  for (double x : {0.0, 1.7, 4.0}) {
    const double conv = heat_convolve([&](double y) { return G(y, 0.8); }, lam, nu, x, 1.2, 3001);
    CHECK(conv == doctest::Approx(G(x, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("level-1 march agrees with its integral representation") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.05, 0.05);
  const double T = 5.0;
  const Grid1D g = sized_grid(p, T, 0.025);

  struct Tape {
    Grid1D grid;
    std::vector<double> times;
    std::vector<std::vector<double>> f;
  } tape{g, {}, {}};
  CascadeOptions opt;
  opt.observer = [&tape](double t, const std::vector<std::vector<double>>& xi,
                         const std::vector<std::vector<double>>&) {
    tape.times.push_back(t);
    tape.f.push_back(xi[0]);  // family 1, level 1
  };
  const WaveHierarchy h = solve_cascade(wm, p, g, 1, T, {T}, opt);

  auto sample = [&](double y, double s) {
    if (y <= g.x_min || y >= g.x_max) return 0.0;
    const auto it = std::upper_bound(tape.times.begin(), tape.times.end(), s);
    const size_t k = std::min(tape.times.size() - 1, static_cast<size_t>(it - tape.times.begin()));
    auto space = [&](const std::vector<double>& v) {
      const double pos = (y - g.x_min) / g.dx;
      const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, g.n - 2);
      const double w = pos - j;
      return (1.0 - w) * v[j] + w * v[j + 1];
    };
    if (k == 0) return space(tape.f[0]);
    const double w = (s - tape.times[k - 1]) / (tape.times[k] - tape.times[k - 1]);
    return (1.0 - w) * space(tape.f[k - 1]) + w * space(tape.f[k]);
  };
  const DiffusionWave th1(1, wm.m1, p), th2(2, wm.m2, p);
  auto forcing = [&](double y, double s) {
    const double t2 = th2.value(y, s);
    return th1.value(y, s) * sample(y, s) + 0.5 * t2 * t2;
  };
  DuhamelOptions dopt;
  dopt.n_s = 400;
  dopt.n_rho = 1401;
  double max_diff = 0.0, max_ref = 0.0;
  for (double off : {-1.5, 0.0, 1.0}) {
    const double x = p.lambda1 * (T + 1.0) + off * std::sqrt(T + 1.0);
    const double oracle = duhamel_oracle(forcing, p.lambda1, p.nu, x, T, dopt);
    const double marched =
        probe_field(h.xi_field(0, 1, 1), ProbeSpec{ProbeSpec::Mode::fixed, x, 1}, p);
    max_diff = std::max(max_diff, std::abs(marched - oracle));
    max_ref = std::max(max_ref, std::abs(oracle));
  }
  CHECK(max_diff / max_ref < 1e-3);
}

TEST_CASE("refinement shrinks the gap to the integral representation") {
  const ModelParams p = default_params();
  const WaveMasses wm = make_masses(0.05, 0.05);
  const double T = 3.0;
  double err[2];
  int idx = 0;
  for (double dx : {0.16, 0.08}) {
    const Grid1D g = sized_grid(p, T, dx);
    struct Tape {
      Grid1D grid;
      std::vector<double> times;
      std::vector<std::vector<double>> f;
    } tape{g, {}, {}};
    CascadeOptions opt;
    opt.observer = [&tape](double t, const std::vector<std::vector<double>>& xi,
                           const std::vector<std::vector<double>>&) {
      tape.times.push_back(t);
      tape.f.push_back(xi[0]);
    };
    const WaveHierarchy h = solve_cascade(wm, p, g, 1, T, {T}, opt);
    auto sample = [&](double y, double s) {
      if (y <= g.x_min || y >= g.x_max) return 0.0;
      const auto it = std::upper_bound(tape.times.begin(), tape.times.end(), s);
      const size_t k =
          std::min(tape.times.size() - 1, static_cast<size_t>(it - tape.times.begin()));
      auto space = [&](const std::vector<double>& v) {
        const double pos = (y - g.x_min) / g.dx;
        const int j = std::clamp(static_cast<int>(std::floor(pos)), 0, g.n - 2);
        const double w = pos - j;
        return (1.0 - w) * v[j] + w * v[j + 1];
      };
      if (k == 0) return space(tape.f[0]);
      const double w = (s - tape.times[k - 1]) / (tape.times[k] - tape.times[k - 1]);
      return (1.0 - w) * space(tape.f[k - 1]) + w * space(tape.f[k]);
    };
    const DiffusionWave th1(1, wm.m1, p), th2(2, wm.m2, p);
    auto forcing = [&](double y, double s) {
      const double t2 = th2.value(y, s);
      return th1.value(y, s) * sample(y, s) + 0.5 * t2 * t2;
    };
    // sup over x values that are nodes of both grids (pointwise errors change sign)
    double worst = 0.0;
    for (double x : {3.2, 4.0, 4.48, 4.8, 5.6, 6.4}) {
      const double oracle =
          duhamel_oracle(forcing, p.lambda1, p.nu, x, T, DuhamelOptions{1200, 3001, 8.7});
      const double marched =
          probe_field(h.xi_field(0, 1, 1), ProbeSpec{ProbeSpec::Mode::fixed, x, 1}, p);
      worst = std::max(worst, std::abs(marched - oracle));
    }
    err[idx++] = worst;
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("two-speed decomposition identity") {
  const ModelParams p = default_params();
  const double nu = p.nu, c = p.c;
  SmoothSpaceTimeFn f;
  const double lam_p = -c, mu = nu;
  f.value = [=](double y, double s) { return Theta_alpha(y, s, lam_p, mu, 2.0); };
  f.ddx = [=](double y, double s) {
    const double w = y - lam_p * (s + 1.0);
    return Theta_alpha(y, s, lam_p, mu, 2.0) * (-2.0 * w / (mu * (s + 1.0)));
  };
  f.lop = [=](double y, double s) {
    const double sp = s + 1.0;
    const double w = y - lam_p * sp;
    return Theta_alpha(y, s, lam_p, mu, 2.0) *
           ((nu / mu - 1.0) / sp + (w * w / (mu * sp * sp)) * (1.0 - 2.0 * nu / mu));
  };
  DuhamelOptions opt;
  opt.n_s = 500;
  CHECK(heat_decomposition_residual(f, c, -c, nu, 0.0, 4.0, opt) < 1e-6);

  SmoothSpaceTimeFn zero;
  zero.value = [](double, double) { return 0.0; };
  zero.ddx = [](double, double) { return 0.0; };
  zero.lop = [](double, double) { return 0.0; };
  CHECK(heat_decomposition_residual(zero, c, -c, nu, 1.0, 4.0, DuhamelOptions{64, 201, 8.7}) ==
        0.0);
  CHECK_THROWS_AS(heat_decomposition_residual(f, c, c, nu, 0.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(heat_decomposition_residual(f, c, -c, nu, 0.0, 0.5), std::invalid_argument);
}
