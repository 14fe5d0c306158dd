#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betax/scaling.hpp"

namespace betax::config {

/// Resolved parameters for one experiment run.  Serializes to flat
/// key = value text (diff-friendly, lossless round trip); command-line
/// flags override file values.
struct ExperimentConfig {
  std::string subcommand = "verify-sum";
  scaling::RegimeConfig regime;
  std::vector<std::int64_t> n_ladder = {10'000, 100'000, 1'000'000, 10'000'000};
  std::int64_t replicas = 2000;
  std::uint64_t master_seed = 1;
  std::vector<double> x_grid = {0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> bin_edges = {0.0, 1.0, 2.0, 4.0};
  double window_min = -2.0;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json, applies to the table artifacts
  int threads = 0;             // 0: BETA_EXTREMES_THREADS or hardware count
  std::int64_t samples = 10'000;  // bounds-check draw count

  void validate() const;  // throws std::invalid_argument
  std::string to_kv_text() const;
  static ExperimentConfig from_kv_text(const std::string& text);
};

}  // namespace betax::config
