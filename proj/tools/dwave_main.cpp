#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwave/config.hpp"
#include "dwave/io.hpp"
#include "dwave/runner.hpp"

namespace {

void add_config_options(CLI::App* app, dwave::ExperimentConfig& cfg) {
  app->set_config("--config")->configurable(false);

  auto* model = app->add_option_group("model");
  model->add_option("--gamma-p", cfg.gamma_p, "pressure-law exponent")->capture_default_str();
  model->add_option("--nu", cfg.nu, "viscosity")->capture_default_str();

  auto* data = app->add_option_group("data");
  data->add_option("--data-kind", cfg.data_kind, "gaussian | dgaussian | table")
      ->capture_default_str();
  data->add_option("--amp-v", cfg.amp_v, "volume perturbation amplitude")->capture_default_str();
  data->add_option("--amp-u", cfg.amp_u, "velocity perturbation amplitude")->capture_default_str();
  data->add_option("--data-width", cfg.width, "bump width")->capture_default_str();
  data->add_option("--table-path", cfg.table_path, "CSV with columns x,v,u");
  data->add_option("--mass1", cfg.mass1, "wave mass M1 (wave/cascade runs)")
      ->capture_default_str();
  data->add_option("--mass2", cfg.mass2, "wave mass M2 (wave/cascade runs)")
      ->capture_default_str();

  auto* grid = app->add_option_group("grid");
  grid->add_option("--dx", cfg.dx, "grid spacing")->capture_default_str();
  grid->add_option("--half-width", cfg.half_width, "domain half width (0 = auto-size)")
      ->capture_default_str();
  grid->add_option("--margin", cfg.margin, "auto-size slack in units of sqrt(t_end+1)")
      ->capture_default_str();

  auto* time = app->add_option_group("time");
  time->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
  time->add_option("--cfl", cfg.cfl, "advective CFL number")->capture_default_str();
  time->add_option("--cp-t0", cfg.cp_t0, "first checkpoint")->capture_default_str();
  time->add_option("--cp-ratio", cfg.cp_ratio, "checkpoint ratio")->capture_default_str();

  auto* analysis = app->add_option_group("analysis");
  analysis->add_option("--depth", cfg.depth, "expansion depth n")->capture_default_str();
  analysis->add_option("--n-max", cfg.n_max, "hierarchy depth")->capture_default_str();
  analysis->add_option("--fit-lo", cfg.fit_lo, "fit window start")->capture_default_str();
  analysis->add_option("--fit-hi", cfg.fit_hi, "fit window end")->capture_default_str();

  auto* green = app->add_option_group("green");
  green->add_option("--sigma-dx", cfg.sigma_dx, "mollifier width in cells")
      ->capture_default_str();
  green->add_option("--green-dx", cfg.green_dx, "grid spacing of the kernel runs")
      ->capture_default_str();
  green->add_option("--green-t-end", cfg.green_t_end, "final time of the kernel runs")
      ->capture_default_str();
  green->add_option("--green-fit-lo", cfg.green_fit_lo, "kernel fit window start")
      ->capture_default_str();
  green->add_option("--green-fit-hi", cfg.green_fit_hi, "kernel fit window end")
      ->capture_default_str();

  app->add_option("--dump-fields", cfg.dump_fields, "none | last | all")
      ->capture_default_str();
  app->add_option("--jobs", cfg.jobs, "parallel independent experiments")
      ->capture_default_str();
  app->add_flag("--seedless", "all computation is deterministic; no RNG in the core")
      ->configurable(false);
}

int print_claims(const dwave::SuiteResult& res) {
  int failures = 0;
  for (const auto& c : res.claims) {
    std::printf("[%s] %-42s measured=%.6g expected=%.6g tol=%.3g%s\n",
                c.pass ? "PASS" : "FAIL", c.id.c_str(), c.measured, c.expected, c.tol,
                c.r_squared >= 0.0 ? (" R2=" + std::to_string(c.r_squared)).c_str() : "");
    if (!c.pass) ++failures;
  }
  std::printf("%s: %zu claims, %d failures (%.1f s)\n", res.suite.c_str(), res.claims.size(),
              failures, res.wall_seconds);
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diffusion-wave verification laboratory for the 1D viscous p-system"};
  app.require_subcommand(1);

  dwave::ExperimentConfig cfg;
  std::string out_dir = "runs/out";
  std::string suite;
  std::vector<std::string> report_dirs;

  auto* waves = app.add_subcommand("waves", "tabulate closed-form waves and profiles");
  auto* cascade = app.add_subcommand("cascade", "march the higher-order wave hierarchy");
  auto* pde = app.add_subcommand("pde", "march the full nonlinear system");
  auto* green = app.add_subcommand("green", "march the linearized kernel columns");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* report = app.add_subcommand("report", "aggregate run reports");

  for (CLI::App* sub : {waves, cascade, pde, green, verify}) {
    add_config_options(sub, cfg);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  }
  verify->add_option("--suite", suite, "suite name (default from config)");
  report->add_option("dirs", report_dirs, "run directories")->expected(-1);
  report->add_option("--out", out_dir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      const auto rows = dwave::aggregate_reports(report_dirs);
      dwave::write_aggregate(out_dir, rows);
      int failures = 0;
      for (const auto& r : rows)
        if (!r.pass) ++failures;
      std::printf("aggregated %zu claims from %zu runs, %d failures\n", rows.size(),
                  report_dirs.size(), failures);
      return failures == 0 ? 0 : 1;
    }

    if (!suite.empty()) cfg.suite = suite;
    cfg.validate();

    if (waves->parsed()) {
      dwave::run_waves_dump(cfg, out_dir);
    } else if (cascade->parsed()) {
      dwave::run_cascade_dump(cfg, out_dir);
    } else if (pde->parsed()) {
      dwave::run_pde_dump(cfg, out_dir);
    } else if (green->parsed()) {
      dwave::run_green_dump(cfg, out_dir);
    } else if (verify->parsed()) {
      const dwave::SuiteResult res = dwave::run_suite(cfg.suite, cfg, out_dir);
      return print_claims(res) == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
