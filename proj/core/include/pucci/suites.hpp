#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pucci/run_config.hpp"

namespace pucci {

struct SuiteResult {
  nlohmann::json report;
  bool pass = false;
  /// Field or weight table for --csv; may be empty.
  std::string csv;
};

SuiteResult run_ops_properties(const RunConfig& cfg);
SuiteResult run_radial_suite(const RunConfig& cfg);
SuiteResult run_capacity_suite(const RunConfig& cfg);
SuiteResult run_potential_check(const RunConfig& cfg);
SuiteResult run_solve(const RunConfig& cfg);
SuiteResult run_emp(const RunConfig& cfg);
SuiteResult run_removability(const RunConfig& cfg);

/// Dispatches on cfg.subcommand().
SuiteResult run_subcommand(const RunConfig& cfg);

/// {"subcommand", "config", "pass", "report"}
nlohmann::json envelope(const RunConfig& cfg, const SuiteResult& result);

}  // namespace pucci
