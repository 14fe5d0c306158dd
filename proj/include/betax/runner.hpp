#pragma once

#include <map>
#include <string>
#include <vector>

#include "betax/config.hpp"

namespace betax::run {

/// Rendered artifacts plus the gate verdict; the CLI writes the files and
/// maps gates_passed to its exit code.
struct RunResult {
  std::map<std::string, std::string> files;  // filename -> contents
  bool gates_passed = true;
  std::vector<std::string> messages;
};

RunResult run_verify_sum(const config::ExperimentConfig& cfg);
RunResult run_simulate_ppp(const config::ExperimentConfig& cfg);
RunResult run_eigen_scaling(const config::ExperimentConfig& cfg);
RunResult run_bounds_check(const config::ExperimentConfig& cfg);

RunResult dispatch(const config::ExperimentConfig& cfg);

/// True when |r-1| is nonincreasing along the ladder and strictly decreases
/// on the final step.
bool drift_toward_one(const std::vector<double>& ratios);

}  // namespace betax::run
