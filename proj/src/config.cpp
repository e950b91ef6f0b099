#include "dwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dwave/cascade.hpp"
#include "dwave/io.hpp"

namespace dwave {

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"waves-only", "cascade",    "prop21", "headline-n1",
                                          "green",      "identities", "all"};
  return s;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw std::invalid_argument("config." + field + ": " + msg);
  };
  if (!(gamma_p > 1.0)) fail("gamma_p", "must exceed 1");
  if (!(nu > 0.0)) fail("nu", "must be positive");
  if (data_kind != "gaussian" && data_kind != "dgaussian" && data_kind != "table" &&
      data_kind != "wavepair")
    fail("data_kind", "must be gaussian, dgaussian, table or wavepair");
  if (data_kind == "table" && table_path.empty()) fail("table_path", "required for table data");
  if (!(width > 0.0)) fail("width", "must be positive");
  if (!(dx > 0.0)) fail("dx", "must be positive");
  if (!(t_end > 0.0)) fail("t_end", "must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(cp_t0 > 0.0)) fail("cp_t0", "must be positive");
  if (!(cp_ratio > 1.0)) fail("cp_ratio", "must exceed 1");
  if (depth < 0) fail("depth", "must be >= 0");
  if (n_max < depth) fail("n_max", "must be >= depth");
  if (!(fit_lo < fit_hi)) fail("fit_lo", "window must be increasing");
  if (!(sigma_dx >= 3.0)) fail("sigma_dx", "mollifier must be at least 3 grid cells wide");
  if (!(green_dx > 0.0)) fail("green_dx", "must be positive");
  if (!(green_t_end > 0.0)) fail("green_t_end", "must be positive");
  if (jobs < 1) fail("jobs", "must be >= 1");
  if (dump_fields != "none" && dump_fields != "last" && dump_fields != "all")
    fail("dump_fields", "must be none, last or all");
  if (std::find(known_suites().begin(), known_suites().end(), suite) == known_suites().end())
    fail("suite", "unknown suite '" + suite + "'");
  if (half_width > 0.0) {
    const double c = std::sqrt(gamma_p);
    const double need = c * (t_end + 1.0) + margin * std::sqrt(t_end + 1.0);
    if (half_width < need)
      fail("half_width", "must be >= c(t_end+1) + margin sqrt(t_end+1) = " +
                             format_g17(need));
  }
}

ModelParams ExperimentConfig::params() const {
  return derive_params(PressureLaw::gamma_law(gamma_p), nu);
}

Grid1D ExperimentConfig::build_grid(double t_end_for_sizing, double dx_for_grid) const {
  double hw = half_width;
  if (hw <= 0.0) {
    const double c = std::sqrt(gamma_p);
    hw = c * (t_end_for_sizing + 1.0) + margin * std::sqrt(t_end_for_sizing + 1.0);
  }
  // symmetric grid with a node at x = 0
  const int half_nodes = static_cast<int>(std::ceil(hw / dx_for_grid));
  const double hw_adj = half_nodes * dx_for_grid;
  return Grid1D::make(-hw_adj, hw_adj, 2 * half_nodes + 1);
}

std::vector<double> ExperimentConfig::checkpoints(double t_end_for_schedule) const {
  return geometric_checkpoints(cp_t0, cp_ratio, t_end_for_schedule);
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "amp_u=" << format_g17(amp_u) << '\n'
     << "amp_v=" << format_g17(amp_v) << '\n'
     << "cfl=" << format_g17(cfl) << '\n'
     << "cp_ratio=" << format_g17(cp_ratio) << '\n'
     << "cp_t0=" << format_g17(cp_t0) << '\n'
     << "data_kind=" << data_kind << '\n'
     << "depth=" << depth << '\n'
     << "dump_fields=" << dump_fields << '\n'
     << "dx=" << format_g17(dx) << '\n'
     << "fit_hi=" << format_g17(fit_hi) << '\n'
     << "fit_lo=" << format_g17(fit_lo) << '\n'
     << "gamma_p=" << format_g17(gamma_p) << '\n'
     << "green_dx=" << format_g17(green_dx) << '\n'
     << "green_fit_hi=" << format_g17(green_fit_hi) << '\n'
     << "green_fit_lo=" << format_g17(green_fit_lo) << '\n'
     << "green_t_end=" << format_g17(green_t_end) << '\n'
     << "half_width=" << format_g17(half_width) << '\n'
     << "margin=" << format_g17(margin) << '\n'
     << "mass1=" << format_g17(mass1) << '\n'
     << "mass2=" << format_g17(mass2) << '\n'
     << "n_max=" << n_max << '\n'
     << "nu=" << format_g17(nu) << '\n'
     << "sigma_dx=" << format_g17(sigma_dx) << '\n'
     << "suite=" << suite << '\n'
     << "t_end=" << format_g17(t_end) << '\n'
     << "table_path=" << table_path << '\n'
     << "width=" << format_g17(width) << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a(canonical())); }

}  // namespace dwave
