#include "dwave/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include <json.hpp>

#include "dwave/analysis.hpp"
#include "dwave/cascade.hpp"
#include "dwave/greens.hpp"
#include "dwave/io.hpp"
#include "dwave/pde.hpp"
#include "dwave/quadrature.hpp"
#include "dwave/waves.hpp"

namespace dwave {

using nlohmann::json;

Claim claim_within(const std::string& id, const std::string& target, double measured,
                   double expected, double tol, double r_squared) {
  Claim c;
  c.id = id;
  c.target = target;
  c.kind = Claim::Kind::within;
  c.measured = measured;
  c.expected = expected;
  c.tol = tol;
  c.r_squared = r_squared;
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= tol;
  return c;
}

Claim claim_at_most(const std::string& id, const std::string& target, double measured,
                    double bound, double r_squared) {
  Claim c;
  c.id = id;
  c.target = target;
  c.kind = Claim::Kind::at_most;
  c.measured = measured;
  c.expected = bound;
  c.r_squared = r_squared;
  c.pass = std::isfinite(measured) && measured <= bound;
  return c;
}

Claim claim_at_least(const std::string& id, const std::string& target, double measured,
                     double bound, double r_squared) {
  Claim c;
  c.id = id;
  c.target = target;
  c.kind = Claim::Kind::at_least;
  c.measured = measured;
  c.expected = bound;
  c.r_squared = r_squared;
  c.pass = std::isfinite(measured) && measured >= bound;
  return c;
}

bool SuiteResult::pass() const {
  for (const auto& c : claims)
    if (!c.pass) return false;
  return true;
}

namespace {

const char* kind_name(Claim::Kind k) {
  switch (k) {
    case Claim::Kind::within: return "within";
    case Claim::Kind::at_most: return "at_most";
    default: return "at_least";
  }
}

json claims_to_json(const std::vector<Claim>& claims) {
  json arr = json::array();
  for (const auto& c : claims) {
    json j;
    j["id"] = c.id;
    j["target"] = c.target;
    j["kind"] = kind_name(c.kind);
    j["measured"] = c.measured;
    j["expected"] = c.expected;
    j["tol"] = c.tol;
    j["r_squared"] = c.r_squared;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(j);
  }
  return arr;
}

void write_report_files(const std::string& out_dir, const std::string& suite,
                        const ExperimentConfig& cfg, const std::vector<Claim>& claims,
                        double wall_seconds) {
  ensure_dir(out_dir);
  json rep;
  rep["suite"] = suite;
  rep["version"] = kVersion;
  rep["config_hash"] = cfg.hash();
  bool pass = true;
  for (const auto& c : claims) pass = pass && c.pass;
  rep["pass"] = pass;
  rep["claims"] = claims_to_json(claims);
  write_text(out_dir + "/report.json", rep.dump(2) + "\n");

  std::ostringstream csv;
  csv << "id,kind,measured,expected,tol,r_squared,pass\n";
  for (const auto& c : claims)
    csv << c.id << ',' << kind_name(c.kind) << ',' << format_g17(c.measured) << ','
        << format_g17(c.expected) << ',' << format_g17(c.tol) << ','
        << format_g17(c.r_squared) << ',' << (c.pass ? 1 : 0) << '\n';
  write_text(out_dir + "/report.csv", csv.str());

  json man;
  man["version"] = kVersion;
  man["suite"] = suite;
  man["config_hash"] = cfg.hash();
  man["config"] = cfg.canonical();
  const ModelParams p = cfg.params();
  man["params"] = {{"c", p.c},       {"p2", p.p2},         {"nu", p.nu},
                   {"gamma1", p.gamma[0]}, {"gamma2", p.gamma[1]}};
  man["wall_seconds"] = wall_seconds;
  write_text(out_dir + "/manifest.json", man.dump(2) + "\n");
}

// ------------------------------------------------------------------ waves suite

std::vector<Claim> claims_waves(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<Claim> cl;
  const ModelParams p = cfg.params();
  WaveMasses wm;
  wm.m1 = cfg.mass1;
  wm.m2 = cfg.mass2;
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));
  const double nu = p.nu;

  // mass conservation of the closed form at t in {0,1,10,100}
  {
    const Grid1D grid = cfg.build_grid(100.0, cfg.dx);
    double worst = 0.0;
    std::vector<double> scratch(grid.n);
    for (double t : {0.0, 1.0, 10.0, 100.0})
      for (int i = 1; i <= 2; ++i) {
        const DiffusionWave w(i, wm.m(i), p);
        w.fill(grid, t, scratch);
        worst = std::max(worst, std::abs(trapezoid(scratch, grid.dx) - wm.m(i)));
      }
    cl.push_back(claim_at_most("waves.mass-conservation",
                               "max_t |int theta_i dx - M_i| at t in {0,1,10,100}", worst,
                               1e-8));
  }

  // closed form satisfies its equation with analytic derivatives
  {
    double sup = 0.0;
    for (int i = 1; i <= 2; ++i) {
      const DiffusionWave w(i, wm.m(i), p);
      for (double t : {0.5, 1.0, 3.0, 10.0, 30.0, 100.0}) {
        const double spread = std::sqrt(2.0 * nu * (t + 1.0));
        for (int k = -20; k <= 20; ++k) {
          const double x = p.lambda(i) * (t + 1.0) + 0.5 * k * spread;
          const ThetaDerivs d = w.derivs(x, t);
          const double res =
              d.dt + p.lambda(i) * d.dx + d.value * d.dx - 0.5 * nu * d.dxx;
          sup = std::max(sup, std::abs(res));
        }
      }
    }
    cl.push_back(claim_at_most("waves.burgers-residual",
                               "sup |theta_t + lambda theta_x + (theta^2/2)_x - (nu/2) theta_xx|",
                               sup, 1e-11));
  }

  // similarity identity theta(x,t) = (t+1)^{-1/2} f_{i;0}(z)
  {
    double sup = 0.0;
    for (int i = 1; i <= 2; ++i) {
      const DiffusionWave w(i, wm.m(i), p);
      for (double t : {0.0, 0.7, 2.0, 9.0, 42.0, 100.0}) {
        const double rt = std::sqrt(t + 1.0);
        for (int k = -16; k <= 16; ++k) {
          const double z = 0.6 * k;
          const double x = p.lambda(i) * (t + 1.0) + z * rt;
          sup = std::max(sup, std::abs(rt * w.value(x, t) - profile_f0(i, wm, nu, z)));
        }
      }
    }
    cl.push_back(claim_at_most("waves.similarity-identity",
                               "sup |sqrt(t+1) theta_i - f_{i;0}((x-lambda_i(t+1))/sqrt(t+1))|",
                               sup, 1e-12));
  }

  // profile mass: int f_{i;0} dz = M_i
  {
    double worst = 0.0;
    for (int i = 1; i <= 2; ++i) {
      auto f = [&](double z) { return profile_f0(i, wm, nu, z); };
      const double v = adaptive_simpson(f, -40.0 * std::sqrt(nu), 40.0 * std::sqrt(nu),
                                        std::vector<double>{-3.0, 0.0, 3.0});
      worst = std::max(worst, std::abs(v - wm.m(i)));
    }
    cl.push_back(claim_at_most("waves.profile-f0-mass", "max_i |int f_{i;0} dz - M_i|", worst,
                               1e-8));
  }

  // singular-profile reference value at the origin (mass independent)
  {
    const double ref = std::pow(2.0, -0.25) * std::tgamma(0.75) *
                       std::pow(nu, 0.75);  // nu-scaled Gamma identity
    const double got = profile_fn(1, 1, nu, 0.0);
    cl.push_back(claim_at_most("waves.profile-f11-origin",
                               "rel err of f_{1;1}(0) against 2^{-1/4} Gamma(3/4) nu^{3/4}",
                               std::abs(got - ref) / std::abs(ref), 1e-8));
  }

  // tail behavior of f_{1;1}: Gaussian-type ahead, algebraic behind
  {
    const double z1 = 6.0 * std::sqrt(nu), z2 = 8.0 * std::sqrt(nu);
    const double f1 = profile_fn(1, 1, nu, z1), f2 = profile_fn(1, 1, nu, z2);
    const double slope = (std::log(f2) - std::log(f1)) / (z2 * z2 - z1 * z1);
    cl.push_back(claim_within("waves.fn-exponential-tail",
                              "d log f_{1;1} / d z^2 -> -1/(2 nu) on the forward ray", slope,
                              -0.5 / nu, 0.012 / nu));
    const double alpha0 = alpha_beta(0).alpha;
    const double w1 = 30.0, w2 = 60.0;
    const double c1 = std::abs(profile_fn(1, 1, nu, -w1)) * std::pow(w1, alpha0);
    const double c2 = std::abs(profile_fn(1, 1, nu, -w2)) * std::pow(w2, alpha0);
    const double lim = 0.5 * nu * std::sqrt(2.0 * kPi * nu);  // (1-1/2) nu sqrt(2 pi nu)
    cl.push_back(claim_within("waves.fn-algebraic-tail",
                              "|f_{1;1}(z)| |z|^{3/2} -> (1/2) nu sqrt(2 pi nu) on the back ray",
                              c2 / lim, 1.0, 0.05));
    cl.push_back(claim_within("waves.fn-algebraic-tail-converging",
                              "ratio of |f| |z|^{3/2} at |z| = 60 vs 30 approaches 1",
                              c2 / c1, 1.0, 0.05));
  }

  // amplitude constants: zero masses give zeros; small masses scale quadratically
  if (wm.eps == 0.0) {
    const AmplitudeConstants ac = amplitude_constants(wm, p, 2);
    double worst = 0.0;
    for (int i = 1; i <= 2; ++i)
      for (int n = 1; n <= 2; ++n)
        worst = std::max({worst, std::abs(ac.A_of(i, n)), std::abs(ac.B_of(i, n))});
    cl.push_back(claim_at_most("waves.amplitude-zero-mass",
                               "all amplitude constants vanish for zero masses", worst, 0.0));
  } else {
    const AmplitudeConstants ac = amplitude_constants(wm, p, 1);
    WaveMasses half = wm;
    half.m2 *= 0.5;
    half.eps = std::max(std::abs(half.m1), std::abs(half.m2));
    const AmplitudeConstants ach = amplitude_constants(half, p, 1);
    const double ratio = ach.a[0][1] / ac.a[0][1];  // a_{1;1} quadratic in M_2
    cl.push_back(claim_within("waves.amplitude-mass-scaling",
                              "a_{1;1}(M_2/2) / a_{1;1}(M_2) ~ 1/4 for small masses", ratio,
                              0.25, 0.02));
  }

  if (!out_dir.empty()) {
    // theta tables for external plotting
    const Grid1D grid = cfg.build_grid(100.0, cfg.dx);
    for (int i = 1; i <= 2; ++i) {
      const DiffusionWave w(i, wm.m(i), p);
      ScalarField f(grid, 0.0);
      for (double t : {0.0, 1.0, 10.0, 100.0}) {
        f.t = t;
        w.fill(grid, t, f.v);
        std::ostringstream name;
        name << out_dir << "/theta" << i << "_t" << t << ".csv";
        write_field_csv(name.str(), f);
      }
    }
  }
  return cl;
}

// ---------------------------------------------------------------- cascade suite

// dense in-time storage of the level-1 fields, for the integral-equation cross-check
struct LevelTape {
  Grid1D grid;
  std::vector<double> times;
  std::array<std::vector<std::vector<double>>, 2> f;  // [family-1][step][node]

  double eval(int i, double y, double s) const {
    const auto& seq = f[i - 1];
    if (s <= times.front()) return sample(seq.front(), y);
    if (s >= times.back()) return sample(seq.back(), y);
    const auto it = std::upper_bound(times.begin(), times.end(), s);
    const size_t k = it - times.begin();
    const double w = (s - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * sample(seq[k - 1], y) + w * sample(seq[k], y);
  }

  double sample(const std::vector<double>& v, double y) const {
    // Catmull-Rom on the uniform grid
    if (y <= grid.x_min || y >= grid.x_max) return 0.0;
    const double pos = (y - grid.x_min) / grid.dx;
    int j = static_cast<int>(std::floor(pos));
    j = std::clamp(j, 1, grid.n - 3);
    const double w = pos - j;
    const double p0 = v[j - 1], p1 = v[j], p2 = v[j + 1], p3 = v[j + 2];
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * w + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * w * w +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * w * w * w);
  }
};

std::vector<Claim> claims_cascade(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<Claim> cl;
  const ModelParams p = cfg.params();
  WaveMasses wm;
  wm.m1 = cfg.mass1;
  wm.m2 = cfg.mass2;
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));

  // (a) integral-equation cross-check of the level-1 march at t = 10
  {
    const double t_or = 10.0;
    const double dxo = std::min(cfg.dx, 0.025);
    const Grid1D grid = cfg.build_grid(t_or, dxo);
    LevelTape tape;
    tape.grid = grid;
    CascadeOptions opt;
    opt.cfl = cfg.cfl;
    opt.observer = [&tape](double t, const std::vector<std::vector<double>>& xi,
                           const std::vector<std::vector<double>>&) {
      tape.times.push_back(t);
      tape.f[0].push_back(xi[0]);
      tape.f[1].push_back(xi[1]);
    };
    const WaveHierarchy h =
        solve_cascade(wm, p, grid, 1, t_or, {t_or}, opt);

    const DiffusionWave th1(1, wm.m1, p), th2(2, wm.m2, p);
    DuhamelOptions dopt;
    dopt.n_s = 500;
    dopt.n_rho = 1601;
    double max_diff = 0.0, max_ref = 0.0;
    for (int i = 1; i <= 2; ++i) {
      const DiffusionWave& own = (i == 1) ? th1 : th2;
      const DiffusionWave& other = (i == 1) ? th2 : th1;
      auto forcing = [&](double y, double s) {
        const double cross = other.value(y, s);
        return own.value(y, s) * tape.eval(i, y, s) + 0.5 * cross * cross;
      };
      const double center = p.lambda(i) * (t_or + 1.0);
      const double rt = std::sqrt(t_or + 1.0);
      for (double off : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0}) {
        const double x = center + off * rt;
        const double oracle = duhamel_oracle(forcing, p.lambda(i), p.nu, x, t_or, dopt);
        const double marched = probe_field(h.xi_field(0, i, 1),
                                           ProbeSpec{ProbeSpec::Mode::fixed, x, i}, p);
        max_diff = std::max(max_diff, std::abs(marched - oracle));
        max_ref = std::max(max_ref, std::abs(oracle));
      }
      // two origin-side samples per family complete the 20 points
      for (double x : {0.0, (i == 1 ? 2.0 : -2.0)}) {
        const double oracle = duhamel_oracle(forcing, p.lambda(i), p.nu, x, t_or, dopt);
        const double marched = probe_field(h.xi_field(0, i, 1),
                                           ProbeSpec{ProbeSpec::Mode::fixed, x, i}, p);
        max_diff = std::max(max_diff, std::abs(marched - oracle));
        max_ref = std::max(max_ref, std::abs(oracle));
      }
    }
    const double rel = (max_ref > 0.0) ? max_diff / max_ref : max_diff;
    cl.push_back(claim_at_most("cascade.duhamel-match",
                               "rel sup |xi_{i;1} march - heat-kernel quadrature| at 20 points",
                               rel, 1e-3));
  }

  // (b)+(c) zero-mass invariant, unified field, partial sums at t = 100
  {
    const double T = std::min(100.0, cfg.t_end);
    const Grid1D grid = cfg.build_grid(T, cfg.dx);
    CascadeOptions opt;
    opt.cfl = cfg.cfl;
    opt.with_Xi = true;
    const int levels = 3;
    const auto cps = geometric_checkpoints(cfg.cp_t0, cfg.cp_ratio, T);
    const WaveHierarchy h = solve_cascade(wm, p, grid, levels, T, cps, opt);

    double worst_mass = 0.0;
    for (const auto& cp_masses : h.xi_mass)
      for (double m : cp_masses) worst_mass = std::max(worst_mass, std::abs(m));
    for (const auto& xm : h.Xi_mass)
      worst_mass = std::max({worst_mass, std::abs(xm[0]), std::abs(xm[1])});
    cl.push_back(claim_at_most("cascade.mass-zero",
                               "max over checkpoints |int xi_{i;n} dx| and |int Xi_i dx|",
                               worst_mass, 1e-8));

    const size_t last = h.times.size() - 1;
    const double denom = lp_norm(h.xi_field(last, 1, 1), kInf);
    if (denom == 0.0) {
      cl.push_back(claim_at_most("cascade.partial-sums",
                                 "zero masses: unified field identically zero",
                                 lp_norm(h.Xi[last][0], kInf), 0.0));
    } else {
      std::vector<double> ratio;
      for (int m = 1; m <= levels; ++m) {
        double worst = 0.0;
        for (int i = 1; i <= 2; ++i) {
          ScalarField diff = h.Xi[last][i - 1];
          for (int n = 1; n <= m; ++n)
            for (int j = 0; j < grid.n; ++j) diff.v[j] -= h.xi_field(last, i, n).v[j];
          worst = std::max(worst, lp_norm(diff, kInf));
        }
        ratio.push_back(worst / denom);
      }
      cl.push_back(claim_at_most("cascade.partial-sum-shrink-1to2",
                                 "||Xi - sum_{n<=2} xi|| / ||Xi - sum_{n<=1} xi|| at t = 100",
                                 ratio[1] / ratio[0], 0.5));
      cl.push_back(claim_at_most("cascade.partial-sum-shrink-2to3",
                                 "||Xi - sum_{n<=3} xi|| / ||Xi - sum_{n<=2} xi|| at t = 100",
                                 ratio[2] / ratio[1], 0.5));
      double worst_order = 0.0;
      for (int i = 1; i <= 2; ++i)
        for (int n = 1; n + 1 <= levels; ++n) {
          const double hi = lp_norm(h.xi_field(last, i, n + 1), kInf);
          const double lo = lp_norm(h.xi_field(last, i, n), kInf);
          if (lo > 0.0) worst_order = std::max(worst_order, hi / lo);
        }
      cl.push_back(claim_at_most("cascade.hierarchy-ordering",
                                 "max |xi_{i;n+1}| / max |xi_{i;n}| at t = 100, n = 1,2",
                                 worst_order, 0.5));
      if (!out_dir.empty()) {
        std::vector<double> ns{1, 2, 3};
        write_table_csv(out_dir + "/partial_sum_ratios.csv", {"n_max", "rel_sup_gap"},
                        {ns, ratio});
      }
    }
  }

  // (d) three-grid convergence of the level-1 field at t = 10
  {
    const double T = 10.0;
    const Grid1D g0 = cfg.build_grid(T, 0.1);
    const Grid1D g1 = Grid1D::make(g0.x_min, g0.x_max, 2 * g0.n - 1);
    const Grid1D g2 = Grid1D::make(g0.x_min, g0.x_max, 2 * g1.n - 1);
    CascadeOptions opt;
    opt.cfl = cfg.cfl;
    const WaveHierarchy h0 = solve_cascade(wm, p, g0, 1, T, {T}, opt);
    const WaveHierarchy h1 = solve_cascade(wm, p, g1, 1, T, {T}, opt);
    const WaveHierarchy h2 = solve_cascade(wm, p, g2, 1, T, {T}, opt);
    double e01 = 0.0, e12 = 0.0;
    for (int j = 0; j < g0.n; ++j) {
      e01 = std::max(e01, std::abs(h0.xi_field(0, 1, 1).v[j] - h1.xi_field(0, 1, 1).v[2 * j]));
      e12 = std::max(e12,
                     std::abs(h1.xi_field(0, 1, 1).v[2 * j] - h2.xi_field(0, 1, 1).v[4 * j]));
    }
    if (e12 == 0.0) {
      cl.push_back(claim_at_most("cascade.grid-convergence",
                                 "zero masses: refinement differences vanish", e01, 0.0));
    } else {
      cl.push_back(claim_within("cascade.grid-convergence",
                                "three-grid error ratio of xi_{1;1} under dx,dt halving", e01 / e12,
                                4.0, 0.5));
    }
  }
  return cl;
}

// ----------------------------------------------------------------- prop21 suite

std::vector<Claim> claims_prop21(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<Claim> cl;
  const ModelParams p = cfg.params();
  WaveMasses wm;
  wm.m1 = cfg.mass1;
  wm.m2 = cfg.mass2;
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));

  const Grid1D grid = cfg.build_grid(cfg.t_end, cfg.dx);
  const auto cps = cfg.checkpoints();
  CascadeOptions opt;
  opt.cfl = cfg.cfl;
  const int levels = std::max(2, cfg.n_max);
  const WaveHierarchy h = solve_cascade(wm, p, grid, levels, cfg.t_end, cps, opt);

  double min_r2 = 1.0;
  const struct {
    double pnorm;
    const char* tag;
  } norms[] = {{1.0, "p1"}, {2.0, "p2"}, {kInf, "pinf"}};
  for (int i = 1; i <= 2; ++i) {
    for (const auto& nm : norms) {
      std::vector<double> series;
      for (size_t cp = 0; cp < h.times.size(); ++cp)
        series.push_back(lp_norm(h.xi_field(cp, i, 1), nm.pnorm));
      const double invp = (nm.pnorm == kInf) ? 0.0 : 1.0 / nm.pnorm;
      const double expct = -(alpha_beta(0).alpha - invp) / 2.0;
      const DecayFit fit = fit_power_law(h.times, series, cfg.fit_lo, cfg.fit_hi);
      min_r2 = std::min(min_r2, fit.r_squared);
      cl.push_back(claim_within(
          std::string("prop21.lp-decay-") + nm.tag + "-f" + std::to_string(i),
          "||xi_{i;1}||_{L^" + std::string(nm.tag + 1) + "} ~ (t+1)^{-(3/2-1/p)/2}",
          fit.exponent, expct, 0.08, fit.r_squared));
      if (!out_dir.empty())
        write_series_csv(out_dir + "/xi1_" + nm.tag + "_f" + std::to_string(i) + ".csv",
                         "norm", h.times, series);
    }
    for (int n = 1; n <= 2; ++n) {
      std::vector<double> series;
      for (size_t cp = 0; cp < h.times.size(); ++cp)
        series.push_back(std::abs(
            probe_field(h.xi_field(cp, i, n), ProbeSpec{ProbeSpec::Mode::fixed, 0.0, i}, p)));
      const double expct = -alpha_beta(n - 1).alpha;
      const DecayFit fit = fit_power_law(h.times, series, cfg.fit_lo, cfg.fit_hi);
      min_r2 = std::min(min_r2, fit.r_squared);
      cl.push_back(claim_within(
          "prop21.origin-decay-n" + std::to_string(n) + "-f" + std::to_string(i),
          "|xi_{i;" + std::to_string(n) + "}(0,t)| ~ (t+1)^{-alpha_{n-1}}", fit.exponent, expct,
          0.1, fit.r_squared));
      if (!out_dir.empty())
        write_series_csv(out_dir + "/xi_origin_n" + std::to_string(n) + "_f" +
                             std::to_string(i) + ".csv",
                         "abs_value", h.times, series);
    }
  }
  cl.push_back(claim_at_least("prop21.fit-quality", "min R^2 over the decay fits", min_r2, 0.98));

  // similarity collapse of xi_{1;1} onto span{f_{1;1}, g}
  {
    const CollapseFit cf = profile_collapse(h, 1, 1, 10.0);
    int increases = 0;
    const size_t m = cf.times.size();
    for (size_t k = m - 5; k < m; ++k)
      if (cf.sup_residual[k] > cf.sup_residual[k - 1]) ++increases;
    cl.push_back(claim_at_most("prop21.collapse-residual-decreasing",
                               "increases of the rescaled sup residual over the last 6 checkpoints",
                               increases, 0));
    const AmplitudeConstants ac = amplitude_constants(wm, p, 1);
    double a_avg = 0.0, b_avg = 0.0;
    int cnt = 0;
    for (size_t k = 0; k < m; ++k)
      if (cf.times[k] >= 300.0) {
        a_avg += cf.A[k];
        b_avg += cf.B[k];
        ++cnt;
      }
    a_avg /= std::max(cnt, 1);
    b_avg /= std::max(cnt, 1);
    cl.push_back(claim_at_most("prop21.collapse-A-match",
                               "rel diff of fitted A_{1;1} against the level recursion",
                               std::abs(a_avg - ac.A_of(1, 1)) / std::abs(ac.A_of(1, 1)), 0.10));
    // The g-component amplitude is reported, not asserted: the remainder envelope decays
    // like (t+1)^{-1/8} relative to the leading term and its g-projection dominates the
    // tiny leading-order B at any reachable time.
    Claim bb;
    bb.id = "prop21.collapse-B-report";
    bb.target = "fitted B_{1;1} (reported against its leading-order value)";
    bb.kind = Claim::Kind::at_most;
    bb.measured = b_avg;
    bb.expected = ac.B_of(1, 1);
    bb.tol = 0.0;
    bb.pass = std::isfinite(b_avg);
    bb.note = "report-only: fitted B carries the slowly decaying remainder projection";
    cl.push_back(bb);
    if (!out_dir.empty())
      write_table_csv(out_dir + "/collapse_xi11.csv", {"t", "A", "B", "sup_residual"},
                      {cf.times, cf.A, cf.B, cf.sup_residual});
  }
  return cl;
}

// --------------------------------------------------------------- headline suite

std::vector<Claim> claims_headline(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<Claim> cl;
  const PressureLaw law = PressureLaw::gamma_law(cfg.gamma_p);
  const ModelParams p = derive_params(law, cfg.nu);
  const Grid1D grid = cfg.build_grid(cfg.t_end, cfg.dx);
  const auto cps = cfg.checkpoints();

  InitialData data;
  if (cfg.data_kind == "wavepair") {
    WaveMasses wm;
    wm.m1 = cfg.mass1;
    wm.m2 = cfg.mass2;
    wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));
    data = build_wavepair_data(wm, p, grid);
  } else {
    DataKind kind = DataKind::gaussian;
    if (cfg.data_kind == "dgaussian") kind = DataKind::dgaussian;
    data = build_initial_data(kind, cfg.amp_v, cfg.amp_u, cfg.width, grid, p);
  }

  PdeOptions popt;
  popt.cfl = cfg.cfl;
  const Trajectory traj = solve_p_system(data, law, p, grid, cfg.t_end, cps, popt);

  CascadeOptions copt;
  copt.cfl = cfg.cfl;
  const int depth = std::max(1, cfg.depth);
  const WaveHierarchy h =
      solve_cascade(data.wave_masses, p, grid, depth, cfg.t_end, cps, copt);

  // conservation of the two integrals over the whole run
  {
    double scale = 0.0;
    {
      std::vector<double> absdata(grid.n);
      for (int j = 0; j < grid.n; ++j)
        absdata[j] = std::abs(data.state.v[j] - 1.0) + std::abs(data.state.u[j]);
      scale = std::max(trapezoid(absdata, grid.dx), 1e-18);
    }
    double drift = 0.0;
    for (size_t cp = 0; cp < traj.times.size(); ++cp) {
      drift = std::max(drift, std::abs(traj.int_v[cp] - traj.int_v0));
      drift = std::max(drift, std::abs(traj.int_u[cp] - traj.int_u0));
    }
    cl.push_back(claim_at_most("headline.conservation",
                               "rel drift of int (v-1) and int u over the run", drift / scale,
                               1e-8));
  }

  // origin decay of the bare and once-corrected remainders
  double min_r2 = 1.0;
  std::vector<double> orig_n0[2], orig_n1[2], linf_n0[2], linf_n1[2], l1_n0[2], l1_n1[2];
  for (size_t cp = 0; cp < h.times.size(); ++cp) {
    const auto r0 = remainder_fields(traj, h, static_cast<int>(cp), 0);
    const auto r1 = remainder_fields_xi(traj, h, static_cast<int>(cp), 1);
    for (int i = 0; i < 2; ++i) {
      orig_n0[i].push_back(std::abs(
          probe_field(r0[i], ProbeSpec{ProbeSpec::Mode::fixed, 0.0, i + 1}, p)));
      orig_n1[i].push_back(std::abs(
          probe_field(r1[i], ProbeSpec{ProbeSpec::Mode::fixed, 0.0, i + 1}, p)));
      linf_n0[i].push_back(lp_norm(r0[i], kInf));
      linf_n1[i].push_back(lp_norm(r1[i], kInf));
      l1_n0[i].push_back(lp_norm(r0[i], 1.0));
      l1_n1[i].push_back(lp_norm(r1[i], 1.0));
    }
  }
  // weighted-sup form of a decay bound: max over the fit window of
  // value(t) (t+1)^{rate} relative to its value at the window start
  auto bound_ratio = [&](const std::vector<double>& series, double rate) {
    double first = -1.0, worst = 0.0;
    for (size_t cp = 0; cp < h.times.size(); ++cp) {
      const double t = h.times[cp];
      if (t < cfg.fit_lo || t > cfg.fit_hi) continue;
      const double w = series[cp] * std::pow(t + 1.0, rate);
      if (first < 0.0) first = w;
      worst = std::max(worst, w / first);
    }
    return worst;
  };

  for (int i = 0; i < 2; ++i) {
    const std::string fi = "-f" + std::to_string(i + 1);
    const DecayFit f0 = fit_power_law(h.times, orig_n0[i], cfg.fit_lo, cfg.fit_hi);
    const DecayFit f1 = fit_power_law(h.times, orig_n1[i], cfg.fit_lo, cfg.fit_hi);
    min_r2 = std::min({min_r2, f0.r_squared, f1.r_squared});
    cl.push_back(claim_within("headline.origin-n0" + fi,
                              "|u_i - theta_i|(0,t) ~ (t+1)^{-3/2}", f0.exponent, -1.5, 0.1,
                              f0.r_squared));
    cl.push_back(claim_within("headline.origin-n1" + fi,
                              "|u_i - theta_i - xi_{i;1}|(0,t) ~ (t+1)^{-7/4}", f1.exponent,
                              -1.75, 0.12, f1.r_squared));
    cl.push_back(claim_at_most("headline.origin-n1-bound" + fi,
                               "|u_i - theta_i - xi_{i;1}|(0,t) (t+1)^{7/4} nonincreasing",
                               bound_ratio(orig_n1[i], 1.75), 1.05));
    const DecayFit gi0 = fit_power_law(h.times, linf_n0[i], cfg.fit_lo, cfg.fit_hi);
    const DecayFit gi1 = fit_power_law(h.times, linf_n1[i], cfg.fit_lo, cfg.fit_hi);
    const DecayFit g10 = fit_power_law(h.times, l1_n0[i], cfg.fit_lo, cfg.fit_hi);
    const DecayFit g11 = fit_power_law(h.times, l1_n1[i], cfg.fit_lo, cfg.fit_hi);
    min_r2 = std::min({min_r2, gi1.r_squared, g11.r_squared});
    cl.push_back(claim_within("headline.n0-linf" + fi,
                              "||u_i - theta_i||_inf ~ (t+1)^{-3/4}", gi0.exponent, -0.75,
                              0.08, gi0.r_squared));
    cl.push_back(claim_within("headline.linf-n1" + fi,
                              "||u_i - theta_i - xi_{i;1}||_inf ~ (t+1)^{-7/8}", gi1.exponent,
                              -0.875, 0.1, gi1.r_squared));
    cl.push_back(claim_within("headline.l1-n1" + fi,
                              "||u_i - theta_i - xi_{i;1}||_1 ~ (t+1)^{-3/8}", g11.exponent,
                              -0.375, 0.08, g11.r_squared));
    cl.push_back(claim_at_most("headline.linf-n1-bound" + fi,
                               "||u_i - theta_i - xi_{i;1}||_inf (t+1)^{7/8} nonincreasing",
                               bound_ratio(linf_n1[i], 0.875), 1.05));
    cl.push_back(claim_at_most("headline.l1-n1-bound" + fi,
                               "||u_i - theta_i - xi_{i;1}||_1 (t+1)^{3/8} nonincreasing",
                               bound_ratio(l1_n1[i], 0.375), 1.05));
    cl.push_back(claim_at_most("headline.linf-improves" + fi,
                               "exponent gain of the once-corrected sup norm",
                               gi1.exponent - gi0.exponent, 0.0));
    cl.push_back(claim_at_most("headline.l1-improves" + fi,
                               "exponent gain of the once-corrected L1 norm",
                               g11.exponent - g10.exponent, 0.0));
    // the once-corrected sup norm is carried by the derivative-correction term of the
    // opposite family; check the analytic prediction at the final checkpoint
    {
      const int opp = 2 - i;  // 1-based opposite family of 1-based family i+1
      const DiffusionWave wp(opp, h.masses.m(opp), p);
      const size_t last = h.times.size() - 1;
      double sup_pred = 0.0;
      for (int j = 0; j < grid.n; ++j)
        sup_pred = std::max(sup_pred, std::abs(wp.dx(grid.x(j), h.times[last])));
      sup_pred *= std::abs(p.gamma_i(opp));
      cl.push_back(claim_within("headline.gamma-term-identified" + fi,
                                "||u_i - theta_i - xi_{i;1}||_inf / ||gamma d_x theta_{i'}||_inf at t_end",
                                linf_n1[i][last] / sup_pred, 1.0, 0.1));
    }
    if (!out_dir.empty()) {
      write_series_csv(out_dir + "/origin_n0" + fi + ".csv", "abs_value", h.times, orig_n0[i]);
      write_series_csv(out_dir + "/origin_n1" + fi + ".csv", "abs_value", h.times, orig_n1[i]);
      write_series_csv(out_dir + "/linf_n1" + fi + ".csv", "norm", h.times, linf_n1[i]);
      write_series_csv(out_dir + "/l1_n1" + fi + ".csv", "norm", h.times, l1_n1[i]);
    }
  }
  cl.push_back(
      claim_at_least("headline.fit-quality", "min R^2 over the headline fits", min_r2, 0.98));

  // normalized-sup diagnostic of the depth-n remainder
  {
    const RemainderSeries rs = remainder(traj, h, depth);
    size_t ref = 0;
    while (ref < rs.times.size() && rs.times[ref] < 10.0) ++ref;
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double base = rs.normalized_sup[ref][i];
      for (size_t cp = ref; cp < rs.times.size(); ++cp)
        worst = std::max(worst, rs.normalized_sup[cp][i] / base);
    }
    cl.push_back(claim_at_most("headline.normalized-sup",
                               "sup_x |v_i|/Psi_{i;n} relative to its value at t ~ 10", worst,
                               3.0));
    if (!out_dir.empty()) {
      std::vector<double> p1, p2;
      for (size_t cp = 0; cp < rs.times.size(); ++cp) {
        p1.push_back(rs.normalized_sup[cp][0]);
        p2.push_back(rs.normalized_sup[cp][1]);
      }
      write_table_csv(out_dir + "/normalized_sup.csv", {"t", "family1", "family2"},
                      {rs.times, p1, p2});
    }
  }
  return cl;
}

// ------------------------------------------------------------------ green suite

std::vector<Claim> claims_green(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<Claim> cl;
  const ModelParams p = cfg.params();
  const double T = cfg.green_t_end;
  ExperimentConfig gcfg = cfg;
  gcfg.t_end = T;
  const Grid1D grid = gcfg.build_grid(T, cfg.green_dx);
  const auto cps = geometric_checkpoints(1.0, cfg.cp_ratio, T);

  auto run_and_fit = [&](double sigma) {
    const GreensRun run = numerical_green(p, sigma, grid, T, cps);
    const auto residual = gpwe_residual_series(run);
    return std::make_pair(run, residual);
  };

  const double sigma = cfg.sigma_dx * cfg.green_dx;
  const auto [run, residual] = run_and_fit(sigma);

  double mass_err = 0.0;
  for (const auto& m : run.mass_matrix) {
    mass_err = std::max(mass_err, std::abs(m.a11 - 1.0));
    mass_err = std::max(mass_err, std::abs(m.a22 - 1.0));
    mass_err = std::max(mass_err, std::abs(m.a12));
    mass_err = std::max(mass_err, std::abs(m.a21));
  }
  cl.push_back(claim_at_most("green.mass-identity",
                             "max entrywise |int G dx - I| over checkpoints", mass_err, 1e-8));

  const DecayFit fres =
      fit_power_law(run.times, residual, cfg.green_fit_lo, cfg.green_fit_hi);
  cl.push_back(claim_within("green.gpwe-residual-exponent",
                            "sup |G - G*_sigma - singular| ~ t^{-1}", fres.exponent, -1.0, 0.15,
                            fres.r_squared));
  const auto gsup = gstar_supnorm_series(run);
  const DecayFit fstar = fit_power_law(run.times, gsup, cfg.green_fit_lo, cfg.green_fit_hi);
  cl.push_back(claim_within("green.gstar-exponent", "sup |G*_sigma| ~ t^{-1/2}", fstar.exponent,
                            -0.5, 0.1, fstar.r_squared));

  const auto offd = offdiag_supnorm_series(run);
  const DecayFit foff = fit_power_law(run.times, offd, cfg.green_fit_lo, cfg.green_fit_hi);
  cl.push_back(claim_within("green.offdiag-exponent",
                            "off-diagonal entries of l_i G [r_1 r_2] ~ t^{-1}", foff.exponent,
                            -1.0, 0.15, foff.r_squared));

  for (int i = 1; i <= 2; ++i) {
    const RefinedResidual rr = refined_residual(i, run);
    const DecayFit fw =
        fit_power_law(run.times, rr.with_gamma, cfg.green_fit_lo, cfg.green_fit_hi);
    const DecayFit fo =
        fit_power_law(run.times, rr.without_gamma, cfg.green_fit_lo, cfg.green_fit_hi);
    cl.push_back(claim_within("green.refined-with-gamma-f" + std::to_string(i),
                              "opposite-characteristic residual with derivative correction ~ t^{-3/2}",
                              fw.exponent, -1.5, 0.15, fw.r_squared));
    cl.push_back(claim_within("green.refined-without-gamma-f" + std::to_string(i),
                              "opposite-characteristic residual without correction ~ t^{-1}",
                              fo.exponent, -1.0, 0.15, fo.r_squared));
    if (!out_dir.empty()) {
      write_series_csv(out_dir + "/refined_with_f" + std::to_string(i) + ".csv", "residual",
                       run.times, rr.with_gamma);
      write_series_csv(out_dir + "/refined_without_f" + std::to_string(i) + ".csv", "residual",
                       run.times, rr.without_gamma);
    }
  }
  cl.push_back(claim_at_most("green.gamma-antisymmetry", "|gamma_1 + gamma_2|",
                             std::abs(p.gamma[0] + p.gamma[1]), 1e-15));

  // mollifier consistency: halve sigma from 2x the default
  {
    const auto [run2, residual2] = run_and_fit(2.0 * sigma);
    const DecayFit f2 =
        fit_power_law(run2.times, residual2, cfg.green_fit_lo, cfg.green_fit_hi);
    cl.push_back(claim_at_most("green.mollifier-consistency",
                               "exponent shift of the structure residual when sigma halves",
                               std::abs(f2.exponent - fres.exponent), 0.05));
  }

  if (!out_dir.empty()) {
    write_series_csv(out_dir + "/gpwe_residual.csv", "residual", run.times, residual);
    write_series_csv(out_dir + "/gstar_supnorm.csv", "norm", run.times, gsup);
    write_series_csv(out_dir + "/offdiag_supnorm.csv", "norm", run.times, offd);
  }
  return cl;
}

// ------------------------------------------------------------- identities suite

std::vector<Claim> claims_identities(const ExperimentConfig& cfg, const std::string&) {
  std::vector<Claim> cl;
  const ModelParams p = cfg.params();
  const double nu = p.nu, c = p.c;

  // exact decomposition identity for a moving Gaussian envelope
  {
    auto make_theta2 = [&](double lam) {
      SmoothSpaceTimeFn f;
      const double mu = nu;
      f.value = [lam, mu](double y, double s) { return Theta_alpha(y, s, lam, mu, 2.0); };
      f.ddx = [lam, mu](double y, double s) {
        const double w = y - lam * (s + 1.0);
        return Theta_alpha(y, s, lam, mu, 2.0) * (-2.0 * w / (mu * (s + 1.0)));
      };
      // (d_t + lam d_x - (nu/2) d_x^2) Theta_2 with mu = nu
      f.lop = [lam, mu, nu](double y, double s) {
        const double sp = s + 1.0;
        const double w = y - lam * sp;
        const double val = Theta_alpha(y, s, lam, mu, 2.0);
        return val * ((nu / mu - 1.0) / sp + (w * w / (mu * sp * sp)) * (1.0 - 2.0 * nu / mu));
      };
      return f;
    };
    const SmoothSpaceTimeFn f = make_theta2(-c);
    DuhamelOptions opt;
    opt.n_s = 600;
    double worst = 0.0;
    const double pts[][2] = {{0.0, 4.0}, {2.0, 9.0}, {-3.0, 4.0}, {5.0, 16.0}, {1.0, 2.25}};
    for (const auto& pt : pts)
      worst = std::max(worst, heat_decomposition_residual(f, c, -c, nu, pt[0], pt[1], opt));
    cl.push_back(claim_at_most("identities.heat-decomposition",
                               "two-speed kernel decomposition residual at 5 points", worst,
                               1e-6));
    // swapped speeds flip the leading prefactor; identity must still close
    const SmoothSpaceTimeFn fswap = make_theta2(c);
    const double res_swap = heat_decomposition_residual(fswap, -c, c, nu, 0.0, 4.0, opt);
    cl.push_back(claim_at_most("identities.heat-decomposition-swapped",
                               "decomposition residual with the speeds exchanged", res_swap,
                               1e-6));
  }

  // semigroup identity of the advected heat kernel
  {
    auto G = [&](double x, double t) {
      return std::exp(-(x - c * t) * (x - c * t) / (2.0 * nu * t)) /
             std::sqrt(2.0 * kPi * nu * t);
    };
    double worst = 0.0;
    const double pts[][3] = {{2.0 * c, 2.0, 0.7}, {0.0, 1.0, 0.5}, {1.5, 3.0, 2.0}};
    for (const auto& pt : pts) {
      const double x = pt[0], t = pt[1], s = pt[2];
      const double conv =
          heat_convolve([&](double y) { return G(y, s); }, c, nu, x, t - s, 3001);
      worst = std::max(worst, std::abs(conv - G(x, t)));
    }
    cl.push_back(claim_at_most("identities.semigroup",
                               "|int G(x-y,t-s) G(y,s) dy - G(x,t)|", worst, 1e-8));
  }

  // zero forcing gives exactly zero
  {
    const double v = duhamel_oracle([](double, double) { return 0.0; }, c, nu, 1.0, 2.0,
                                    DuhamelOptions{64, 201, 8.7});
    cl.push_back(claim_at_most("identities.duhamel-zero", "zero forcing maps to zero", std::abs(v),
                               0.0));
  }
  return cl;
}

std::vector<std::string> sub_suites() {
  return {"waves-only", "cascade", "prop21", "headline-n1", "green", "identities"};
}

}  // namespace

SuiteResult run_suite(const std::string& suite, const ExperimentConfig& cfg,
                      const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult res;
  res.suite = suite;
  if (!out_dir.empty()) ensure_dir(out_dir);

  if (suite == "all") {
    std::vector<std::string> subs = sub_suites();
    std::vector<std::future<SuiteResult>> futs;
    const int jobs = std::max(1, cfg.jobs);
    std::vector<SuiteResult> results(subs.size());
    if (jobs > 1) {
      for (size_t k = 0; k < subs.size(); ++k) {
        const std::string sub_dir = out_dir.empty() ? "" : out_dir + "/" + subs[k];
        futs.push_back(std::async(std::launch::async, [&, k, sub_dir] {
          return run_suite(subs[k], cfg, sub_dir);
        }));
      }
      for (size_t k = 0; k < subs.size(); ++k) results[k] = futs[k].get();
    } else {
      for (size_t k = 0; k < subs.size(); ++k) {
        const std::string sub_dir = out_dir.empty() ? "" : out_dir + "/" + subs[k];
        results[k] = run_suite(subs[k], cfg, sub_dir);
      }
    }
    for (auto& r : results)
      res.claims.insert(res.claims.end(), r.claims.begin(), r.claims.end());
  } else if (suite == "waves-only") {
    res.claims = claims_waves(cfg, out_dir);
  } else if (suite == "cascade") {
    res.claims = claims_cascade(cfg, out_dir);
  } else if (suite == "prop21") {
    res.claims = claims_prop21(cfg, out_dir);
  } else if (suite == "headline-n1") {
    res.claims = claims_headline(cfg, out_dir);
  } else if (suite == "green") {
    res.claims = claims_green(cfg, out_dir);
  } else if (suite == "identities") {
    res.claims = claims_identities(cfg, out_dir);
  } else {
    throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out_dir.empty()) write_report_files(out_dir, suite, cfg, res.claims, res.wall_seconds);
  return res;
}

namespace {

void dump_hierarchy(const WaveHierarchy& h, const ExperimentConfig& cfg,
                    const std::string& out_dir) {
  json man;
  man["version"] = kVersion;
  man["config_hash"] = cfg.hash();
  man["config"] = cfg.canonical();
  man["checkpoints"] = h.times;
  man["n_max"] = h.n_max;
  man["masses"] = {h.masses.m1, h.masses.m2};
  double worst_mass = 0.0;
  for (const auto& ms : h.xi_mass)
    for (double m : ms) worst_mass = std::max(worst_mass, std::abs(m));
  man["max_abs_level_mass"] = worst_mass;
  write_text(out_dir + "/manifest.json", man.dump(2) + "\n");

  const bool all = cfg.dump_fields == "all";
  if (cfg.dump_fields == "none") return;
  for (size_t cp = 0; cp < h.times.size(); ++cp) {
    if (!all && cp + 1 != h.times.size()) continue;
    for (int i = 1; i <= 2; ++i) {
      std::ostringstream base;
      base << out_dir << "/cp" << cp << "_f" << i;
      write_field_csv(base.str() + "_theta.csv", h.theta[cp][i - 1]);
      for (int n = 1; n <= h.n_max; ++n)
        write_field_csv(base.str() + "_xi" + std::to_string(n) + ".csv",
                        h.xi_field(cp, i, n));
      if (h.has_Xi) write_field_csv(base.str() + "_Xi.csv", h.Xi[cp][i - 1]);
    }
  }
}

}  // namespace

void run_waves_dump(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const ModelParams p = cfg.params();
  WaveMasses wm;
  wm.m1 = cfg.mass1;
  wm.m2 = cfg.mass2;
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));

  const Grid1D grid = cfg.build_grid(100.0, cfg.dx);
  ScalarField f(grid, 0.0);
  for (int i = 1; i <= 2; ++i) {
    const DiffusionWave w(i, wm.m(i), p);
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      f.t = t;
      w.fill(grid, t, f.v);
      std::ostringstream name;
      name << out_dir << "/theta" << i << "_t" << t << ".csv";
      write_field_csv(name.str(), f);
    }
  }
  // similarity profiles on a z-table
  std::vector<double> zs;
  for (double z = -20.0; z <= 8.0 + 1e-9; z += 0.01) zs.push_back(z);
  std::vector<std::vector<double>> cols{zs};
  std::vector<std::string> header{"z"};
  for (int i = 1; i <= 2; ++i) {
    std::vector<double> col;
    for (double z : zs) col.push_back(profile_f0(i, wm, p.nu, z));
    cols.push_back(std::move(col));
    header.push_back("f" + std::to_string(i) + "0");
    for (int n = 1; n <= std::max(1, cfg.n_max); ++n) {
      std::vector<double> cn;
      for (double z : zs) cn.push_back(profile_fn(i, n, p.nu, z));
      cols.push_back(std::move(cn));
      header.push_back("f" + std::to_string(i) + std::to_string(n));
    }
  }
  {
    std::vector<double> gz;
    for (double z : zs) gz.push_back(profile_g(z, p.nu));
    cols.push_back(std::move(gz));
    header.push_back("g");
  }
  write_table_csv(out_dir + "/profiles.csv", header, cols);

  const AmplitudeConstants ac = amplitude_constants(wm, p, std::max(1, cfg.n_max));
  json man;
  man["version"] = kVersion;
  man["config_hash"] = cfg.hash();
  man["masses"] = {wm.m1, wm.m2};
  for (int i = 1; i <= 2; ++i) {
    json fam;
    fam["A"] = ac.A[i - 1];
    fam["B"] = ac.B[i - 1];
    fam["a"] = ac.a[i - 1];
    fam["b"] = ac.b[i - 1];
    man["amplitude_constants"]["family" + std::to_string(i)] = fam;
  }
  write_text(out_dir + "/manifest.json", man.dump(2) + "\n");
}

void run_cascade_dump(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const ModelParams p = cfg.params();
  WaveMasses wm;
  wm.m1 = cfg.mass1;
  wm.m2 = cfg.mass2;
  wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));
  const Grid1D grid = cfg.build_grid(cfg.t_end, cfg.dx);
  CascadeOptions opt;
  opt.cfl = cfg.cfl;
  opt.with_Xi = true;
  const WaveHierarchy h =
      solve_cascade(wm, p, grid, std::max(1, cfg.n_max), cfg.t_end, cfg.checkpoints(), opt);
  dump_hierarchy(h, cfg, out_dir);
}

void run_pde_dump(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const PressureLaw law = PressureLaw::gamma_law(cfg.gamma_p);
  const ModelParams p = derive_params(law, cfg.nu);
  const Grid1D grid = cfg.build_grid(cfg.t_end, cfg.dx);
  InitialData data;
  if (cfg.data_kind == "wavepair") {
    WaveMasses wm;
    wm.m1 = cfg.mass1;
    wm.m2 = cfg.mass2;
    wm.eps = std::max(std::abs(wm.m1), std::abs(wm.m2));
    data = build_wavepair_data(wm, p, grid);
  } else {
    DataKind kind = DataKind::gaussian;
    if (cfg.data_kind == "dgaussian") kind = DataKind::dgaussian;
    data = build_initial_data(kind, cfg.amp_v, cfg.amp_u, cfg.width, grid, p);
  }
  PdeOptions popt;
  popt.cfl = cfg.cfl;
  const Trajectory traj = solve_p_system(data, law, p, grid, cfg.t_end, cfg.checkpoints(), popt);

  json man;
  man["version"] = kVersion;
  man["config_hash"] = cfg.hash();
  man["config"] = cfg.canonical();
  man["checkpoints"] = traj.times;
  man["masses"] = {data.wave_masses.m1, data.wave_masses.m2};
  man["delta_n1"] = smallness_delta(data, 1);
  double drift = 0.0;
  for (size_t cp = 0; cp < traj.times.size(); ++cp) {
    drift = std::max(drift, std::abs(traj.int_v[cp] - traj.int_v0));
    drift = std::max(drift, std::abs(traj.int_u[cp] - traj.int_u0));
  }
  man["max_abs_conserved_drift"] = drift;
  write_text(out_dir + "/manifest.json", man.dump(2) + "\n");

  write_series_csv(out_dir + "/int_v.csv", "int_v_minus_1", traj.times, traj.int_v);
  write_series_csv(out_dir + "/int_u.csv", "int_u", traj.times, traj.int_u);
  const bool all = cfg.dump_fields == "all";
  if (cfg.dump_fields == "none") return;
  for (size_t cp = 0; cp < traj.times.size(); ++cp) {
    if (!all && cp + 1 != traj.times.size()) continue;
    write_field_csv(out_dir + "/cp" + std::to_string(cp) + "_v.csv", traj.states[cp].v);
    write_field_csv(out_dir + "/cp" + std::to_string(cp) + "_u.csv", traj.states[cp].u);
  }
}

void run_green_dump(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const ModelParams p = cfg.params();
  const double T = cfg.green_t_end;
  const Grid1D grid = cfg.build_grid(T, cfg.green_dx);
  const double sigma = cfg.sigma_dx * cfg.green_dx;
  const GreensRun run =
      numerical_green(p, sigma, grid, T, geometric_checkpoints(1.0, cfg.cp_ratio, T));

  json man;
  man["version"] = kVersion;
  man["config_hash"] = cfg.hash();
  man["config"] = cfg.canonical();
  man["sigma"] = sigma;
  man["checkpoints"] = run.times;
  double mass_err = 0.0;
  for (const auto& m : run.mass_matrix)
    mass_err = std::max({mass_err, std::abs(m.a11 - 1.0), std::abs(m.a22 - 1.0),
                         std::abs(m.a12), std::abs(m.a21)});
  man["max_abs_mass_defect"] = mass_err;
  write_text(out_dir + "/manifest.json", man.dump(2) + "\n");

  write_series_csv(out_dir + "/gpwe_residual.csv", "residual", run.times,
                   gpwe_residual_series(run));
  const bool all = cfg.dump_fields == "all";
  if (cfg.dump_fields == "none") return;
  static const char* names[4] = {"G11", "G12", "G21", "G22"};
  for (size_t cp = 0; cp < run.times.size(); ++cp) {
    if (!all && cp + 1 != run.times.size()) continue;
    for (int e = 0; e < 4; ++e) {
      ScalarField f(grid, run.times[cp]);
      f.v = run.G[cp].e[e];
      write_field_csv(out_dir + "/cp" + std::to_string(cp) + "_" + names[e] + ".csv", f);
    }
  }
}

std::vector<AggregateRow> aggregate_reports(const std::vector<std::string>& dirs) {
  std::vector<AggregateRow> rows;
  for (const auto& dir : dirs) {
    json rep;
    try {
      rep = json::parse(read_text(dir + "/report.json"));
    } catch (const std::exception& e) {
      throw std::runtime_error("cannot read report in " + dir + ": " + e.what());
    }
    for (const auto& c : rep.at("claims")) {
      AggregateRow r;
      r.run_dir = dir;
      r.suite = rep.value("suite", "");
      r.id = c.at("id").get<std::string>();
      r.measured = c.at("measured").get<double>();
      r.expected = c.at("expected").get<double>();
      r.tol = c.at("tol").get<double>();
      r.pass = c.at("pass").get<bool>();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

void write_aggregate(const std::string& out_dir, const std::vector<AggregateRow>& rows) {
  ensure_dir(out_dir);
  std::ostringstream csv;
  csv << "run_dir,suite,id,measured,expected,tol,pass\n";
  json arr = json::array();
  for (const auto& r : rows) {
    csv << r.run_dir << ',' << r.suite << ',' << r.id << ',' << format_g17(r.measured) << ','
        << format_g17(r.expected) << ',' << format_g17(r.tol) << ',' << (r.pass ? 1 : 0)
        << '\n';
    arr.push_back({{"run_dir", r.run_dir},
                   {"suite", r.suite},
                   {"id", r.id},
                   {"measured", r.measured},
                   {"expected", r.expected},
                   {"tol", r.tol},
                   {"pass", r.pass}});
  }
  write_text(out_dir + "/aggregate.csv", csv.str());
  write_text(out_dir + "/aggregate.json", arr.dump(2) + "\n");
}

}  // namespace dwave
