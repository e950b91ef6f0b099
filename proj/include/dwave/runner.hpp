#pragma once

#include <string>
#include <vector>

#include "dwave/config.hpp"

namespace dwave {

// One verification claim: a measured number against an expected value, with the
// comparison semantics spelled out by `kind`.
struct Claim {
  enum class Kind { within, at_most, at_least };
  std::string id;
  std::string target;  // what is measured and the power law / bound it should follow
  Kind kind = Kind::within;
  double measured = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  double r_squared = -1.0;  // -1 when the claim is not a fit
  bool pass = false;
  std::string note;
};

Claim claim_within(const std::string& id, const std::string& target, double measured,
                   double expected, double tol, double r_squared = -1.0);
Claim claim_at_most(const std::string& id, const std::string& target, double measured,
                    double bound, double r_squared = -1.0);
Claim claim_at_least(const std::string& id, const std::string& target, double measured,
                     double bound, double r_squared = -1.0);

struct SuiteResult {
  std::string suite;
  std::vector<Claim> claims;
  double wall_seconds = 0.0;

  bool pass() const;
};

// Runs one named suite; when `out_dir` is nonempty, writes the run artifacts
// (manifest.json, report.json/csv, series and field CSVs) into it.
SuiteResult run_suite(const std::string& suite, const ExperimentConfig& cfg,
                      const std::string& out_dir);

// Plain data-producing runs behind the CLI subcommands (dump only, no claims).
void run_waves_dump(const ExperimentConfig& cfg, const std::string& out_dir);
void run_cascade_dump(const ExperimentConfig& cfg, const std::string& out_dir);
void run_pde_dump(const ExperimentConfig& cfg, const std::string& out_dir);
void run_green_dump(const ExperimentConfig& cfg, const std::string& out_dir);

struct AggregateRow {
  std::string run_dir, suite, id;
  double measured = 0.0, expected = 0.0, tol = 0.0;
  bool pass = false;
};

// Reads report.json from each run directory. Throws on a missing or corrupt report.
std::vector<AggregateRow> aggregate_reports(const std::vector<std::string>& dirs);

void write_aggregate(const std::string& out_dir, const std::vector<AggregateRow>& rows);

}  // namespace dwave
