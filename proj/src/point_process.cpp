#include "betax/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betax/numeric.hpp"
#include "betax/theory.hpp"

namespace betax::pp {

PointProcessRealization rescale_points(const sampling::TriangularSample& sample,
                                       const scaling::ScalingPair& pair,
                                       double window_min) {
  PointProcessRealization out;
  out.window_min = window_min;
  out.n = sample.n;
  out.regime = pair.regime;
  out.replica = sample.replica;
  out.max_value = -std::numeric_limits<double>::infinity();
  for (const double x : sample.values) {
    const double r = scaling::phi_inverse(pair, x);
    out.max_value = std::max(out.max_value, r);
    if (r >= window_min) out.points.push_back(r);
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

IntervalCountMatrix interval_counts(
    const std::vector<PointProcessRealization>& realizations,
    const std::vector<double>& edges, scaling::Regime regime) {
  if (edges.size() < 2)
    throw std::invalid_argument("interval_counts: need at least two edges");
  for (std::size_t l = 1; l < edges.size(); ++l)
    if (!(edges[l] > edges[l - 1]))
      throw std::invalid_argument("interval_counts: edges must be strictly increasing");
  for (const auto& r : realizations)
    if (edges.front() < r.window_min)
      throw std::invalid_argument("interval_counts: edges fall below the window");

  const std::size_t nbins = edges.size() - 1;
  IntervalCountMatrix m;
  m.edges = edges;
  m.lambda_targets.resize(nbins);
  for (std::size_t l = 0; l < nbins; ++l)
    m.lambda_targets[l] = theory::limit_intensity(regime, edges[l]) -
                          theory::limit_intensity(regime, edges[l + 1]);

  m.counts.resize(realizations.size());
  for (std::size_t r = 0; r < realizations.size(); ++r) {
    m.counts[r].assign(nbins, 0);
    const auto& pts = realizations[r].points;
    for (std::size_t l = 0; l < nbins; ++l) {
      // count of points in (edges[l], edges[l+1]]
      const auto lo = std::upper_bound(pts.begin(), pts.end(), edges[l]);
      const auto hi = std::upper_bound(pts.begin(), pts.end(), edges[l + 1]);
      m.counts[r][l] = hi - lo;
    }
  }
  return m;
}

DispersionReport poisson_dispersion_test(const IntervalCountMatrix& matrix) {
  const std::size_t reps = matrix.counts.size();
  if (reps < 100)
    throw std::invalid_argument("poisson_dispersion_test: need >= 100 replicas");
  const std::size_t nbins = matrix.lambda_targets.size();
  const double r = static_cast<double>(reps);

  std::vector<double> mean(nbins, 0.0), var(nbins, 0.0);
  for (std::size_t l = 0; l < nbins; ++l) {
    NeumaierSum s;
    for (std::size_t i = 0; i < reps; ++i)
      s.add(static_cast<double>(matrix.counts[i][l]));
    mean[l] = s.value() / r;
    NeumaierSum sq;
    for (std::size_t i = 0; i < reps; ++i) {
      const double d = static_cast<double>(matrix.counts[i][l]) - mean[l];
      sq.add(d * d);
    }
    var[l] = sq.value() / (r - 1.0);
  }

  DispersionReport rep;
  rep.bins.resize(nbins);
  const double disp_se = std::sqrt(2.0 / (r - 1.0));
  for (std::size_t l = 0; l < nbins; ++l) {
    BinReport& b = rep.bins[l];
    b.mean = mean[l];
    b.variance = var[l];
    b.mean_se = std::sqrt(var[l] / r);
    b.dispersion = mean[l] > 0.0 ? var[l] / mean[l] : 0.0;
    b.dispersion_se = disp_se;
    b.lambda_target = matrix.lambda_targets[l];
    b.zscore = b.mean_se > 0.0
                   ? (b.mean - b.lambda_target) / b.mean_se
                   : std::numeric_limits<double>::infinity();
    b.poisson_consistent = std::fabs(b.dispersion - 1.0) <= 3.0 * disp_se;
  }

  rep.correlation.assign(nbins, std::vector<double>(nbins, 0.0));
  for (std::size_t a = 0; a < nbins; ++a) {
    rep.correlation[a][a] = 1.0;
    for (std::size_t b = a + 1; b < nbins; ++b) {
      NeumaierSum cov;
      for (std::size_t i = 0; i < reps; ++i)
        cov.add((static_cast<double>(matrix.counts[i][a]) - mean[a]) *
                (static_cast<double>(matrix.counts[i][b]) - mean[b]));
      const double denom = std::sqrt(var[a] * var[b]) * (r - 1.0);
      const double rho = denom > 0.0 ? cov.value() / denom : 0.0;
      rep.correlation[a][b] = rho;
      rep.correlation[b][a] = rho;
    }
  }
  return rep;
}

double gumbel_max_cdf(scaling::Regime regime, double x) {
  return std::exp(-theory::limit_intensity(regime, x));
}

namespace {

// Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

}  // namespace

KsResult ks_statistic(std::vector<double> samples,
                      const std::function<double(double)>& cdf) {
  if (samples.size() < 50)
    throw std::invalid_argument("ks_statistic: need >= 50 samples");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / m - f);
    d = std::max(d, f - static_cast<double>(i) / m);
  }
  const double root = std::sqrt(m);
  const double lambda = (root + 0.12 + 0.11 / root) * d;  // Stephens (1970)
  return {d, kolmogorov_q(lambda)};
}

}  // namespace betax::pp
