#pragma once

#include <cstdint>
#include <vector>

#include "betax/sampling.hpp"
#include "betax/scaling.hpp"

namespace betax::eigen {

/// lambda_max(H) >= max_i H(i,i) (Rayleigh quotient on basis vectors).
double rayleigh_lower(const sampling::TridiagonalMatrix& m);

/// lambda_max(H) <= max_i H(i,i) + 2 max_i H(i,i+1) (Gershgorin circles,
/// collapsed to the two maxima rather than per-row radii).
double gershgorin_upper(const sampling::TridiagonalMatrix& m);

/// Number of eigenvalues strictly below sigma, by the Sturm sequence with
/// the standard tiny-pivot guard.
std::int64_t sturm_count_below(const sampling::TridiagonalMatrix& m,
                               double sigma);

/// Largest eigenvalue by bisection on the Sturm count.  tol <= 0 selects
/// the default 1e-10 * max(1, |gershgorin_upper|).
double largest_eigenvalue(const sampling::TridiagonalMatrix& m,
                          double tol = 0.0);

struct EigenExperimentRecord {
  std::int64_t n;
  std::uint64_t replica;
  double lambda_max;
  double rayleigh_lower;
  double gershgorin_upper;
  double ratio;  // lambda_max / sqrt(log n)
};

struct EigenLevelSummary {
  std::int64_t n;
  double q005, q25, q50, q75, q995;  // ratio quantiles
  double fraction_in_envelope;       // w.r.t. the largest-n envelope
  std::int64_t sandwich_violations;
};

struct EigenExperiment {
  std::vector<EigenExperimentRecord> records;
  std::vector<EigenLevelSummary> summary;
  double envelope_low;   // 0.5% ratio quantile at the largest n
  double envelope_high;  // 99.5% ratio quantile at the largest n
};

EigenExperiment lambda_max_scaling_experiment(
    const scaling::RegimeConfig& cfg, const std::vector<std::int64_t>& n_ladder,
    std::int64_t replicas, std::uint64_t master_seed, int threads = 0);

}  // namespace betax::eigen
