#ifndef MYLLER_SCENARIO_IO_HPP
#define MYLLER_SCENARIO_IO_HPP

#include <iosfwd>
#include <string>

#include "myller/model.hpp"
#include "myller/helix.hpp"

namespace myller {

/// Parse a scenario JSON document. Throws std::runtime_error on schema
/// problems; invariant violations are left to validate().
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_json(const std::string& text, const std::string& origin);

struct RunOptions {
  std::optional<double> step;       // overrides scenario domain step
  ConstancyPolicy policy;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 validation failure, 2 runtime failure
  std::string report;     // full text report (data sections deterministic)
  std::string diagnostics;  // human-readable errors for stderr
};

/// Validate, integrate, analyze and export one scenario end to end.
RunResult run_scenario(const Scenario& scenario, const RunOptions& opts = {});

/// Render one verdict as a deterministic report section.
void write_verdict(std::ostream& out, const HelixVerdict& v);

}  // namespace myller

#endif
