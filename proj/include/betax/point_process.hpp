#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "betax/sampling.hpp"
#include "betax/scaling.hpp"

namespace betax::pp {

/// Rescaled exceedances a_n(X_{i,n} - b_n) retained on [window_min, inf),
/// sorted ascending.  max_value is the maximum over all n rescaled entries,
/// window or not, so the max law can be read off every realization.
struct PointProcessRealization {
  std::vector<double> points;
  double window_min = 0.0;
  std::int64_t n = 0;
  scaling::Regime regime = scaling::Regime::C;
  std::uint64_t replica = 0;
  double max_value = 0.0;
};

PointProcessRealization rescale_points(const sampling::TriangularSample& sample,
                                       const scaling::ScalingPair& pair,
                                       double window_min);

/// Per-replica counts over the bins (edges[l-1], edges[l]] together with the
/// limit targets lambda_l = G(edges[l-1]) - G(edges[l]).
struct IntervalCountMatrix {
  std::vector<double> edges;
  std::vector<std::vector<std::int64_t>> counts;  // counts[replica][bin]
  std::vector<double> lambda_targets;
};

IntervalCountMatrix interval_counts(
    const std::vector<PointProcessRealization>& realizations,
    const std::vector<double>& edges, scaling::Regime regime);

struct BinReport {
  double mean;
  double mean_se;
  double variance;
  double dispersion;     // variance / mean, the Poisson index
  double dispersion_se;  // sqrt(2/(R-1)) under the Poisson null
  double lambda_target;
  double zscore;  // (mean - lambda_target) / mean_se
  bool poisson_consistent;
};

struct DispersionReport {
  std::vector<BinReport> bins;
  std::vector<std::vector<double>> correlation;  // across bins, over replicas
};

/// Requires at least 100 replicas.
DispersionReport poisson_dispersion_test(const IntervalCountMatrix& matrix);

/// Limiting law of the rescaled maximum: P(max <= x) -> exp(-G(x)).
double gumbel_max_cdf(scaling::Regime regime, double x);

struct KsResult {
  double d;
  double p_value;
};

/// Two-sided Kolmogorov-Smirnov statistic with the asymptotic p-value
/// (Stephens' small-sample argument scaling).  Requires >= 50 samples.
KsResult ks_statistic(std::vector<double> samples,
                      const std::function<double(double)>& cdf);

}  // namespace betax::pp
