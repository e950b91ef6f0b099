#pragma once

#include <string>
#include <vector>

#include "dwave/model.hpp"

namespace dwave {

inline constexpr const char* kVersion = "0.1.0";

// One experiment description: model, data, grid sizing rule, schedule, suite knobs.
// All fields have working defaults (the flagship configuration).
struct ExperimentConfig {
  // model
  double gamma_p = 1.4;
  double nu = 1.0;

  // initial data (pde-based suites)
  std::string data_kind = "wavepair";  // wavepair | gaussian | dgaussian | table
  double amp_v = 0.0;
  double amp_u = 0.018806319403430655;  // characteristic masses ~ 0.02 for the defaults
  double width = 1.0;
  std::string table_path;

  // wave masses (cascade-only suites)
  double mass1 = 0.02;
  double mass2 = 0.02;

  // grid
  double dx = 0.05;
  double half_width = 0.0;  // 0 = auto: c(t_end+1) + margin sqrt(t_end+1), rounded up
  double margin = 12.0;

  // time marching and checkpoint schedule
  double t_end = 800.0;
  double cfl = 0.8;
  double cp_t0 = 1.0;
  double cp_ratio = 1.1892071150027210667;  // 2^{1/4}

  // analysis
  int depth = 1;   // expansion depth n
  int n_max = 2;   // hierarchy depth
  double fit_lo = 50.0;
  double fit_hi = 800.0;

  // green's-function experiment
  double sigma_dx = 5.0;  // mollifier width in units of dx
  double green_t_end = 100.0;
  double green_dx = 0.025;
  double green_fit_lo = 5.0;
  double green_fit_hi = 100.0;

  // run control
  std::string suite = "headline-n1";
  std::string out_dir = "runs/out";
  int jobs = 1;
  std::string dump_fields = "last";  // none | last | all

  void validate() const;  // throws std::invalid_argument with a field-level message

  ModelParams params() const;
  Grid1D build_grid(double t_end_for_sizing, double dx_for_grid) const;
  Grid1D build_grid() const { return build_grid(t_end, dx); }
  std::vector<double> checkpoints(double t_end_for_schedule) const;
  std::vector<double> checkpoints() const { return checkpoints(t_end); }

  std::string canonical() const;  // sorted key=value lines (hash input)
  std::string hash() const;
};

const std::vector<std::string>& known_suites();

}  // namespace dwave
