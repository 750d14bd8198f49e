#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "diffusefield/config.hpp"
#include "diffusefield/field.hpp"

namespace diffusefield {

// Layout sampled, beta set and gain law applied. Mode matching solves here.
SourceSet build_sources(const RunConfig& c);

// Each command writes into c.out_dir and returns the paths it wrote.
std::vector<std::string> cmd_map(const RunConfig& c);
std::vector<std::string> cmd_analytic_sweep(const RunConfig& c);
std::vector<std::string> cmd_isotropy(const RunConfig& c);
std::vector<std::string> cmd_modematch(const RunConfig& c);
std::vector<std::string> cmd_wfs_sweep(const RunConfig& c);

struct ValidateOptions {
  std::vector<std::string> only;
  std::optional<double> inject_beta;  // replaces the default beta in the shell checks
};

struct CheckResult {
  std::string group;
  std::string name;
  double measured;
  double tolerance;
  bool pass;
};

std::vector<std::string> validate_groups();
std::vector<CheckResult> run_validation(const ValidateOptions& opts);
// Prints the table; returns true if every check passed.
bool print_validation(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace diffusefield
