#include "betax/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betax/parallel.hpp"

namespace betax::eigen {

namespace {

void check_matrix(const sampling::TridiagonalMatrix& m, std::int64_t min_n,
                  const char* where) {
  const std::int64_t n = m.size();
  if (n < min_n) throw std::domain_error(std::string(where) + ": matrix too small");
  if (m.offdiagonal.size() + 1 != m.diagonal.size() &&
      !(n == 1 && m.offdiagonal.empty()))
    throw std::domain_error(std::string(where) + ": offdiagonal length must be n-1");
  for (const double v : m.diagonal)
    if (!std::isfinite(v)) throw std::domain_error(std::string(where) + ": non-finite entry");
  for (const double v : m.offdiagonal)
    if (!std::isfinite(v)) throw std::domain_error(std::string(where) + ": non-finite entry");
}

double pivmin_of(const sampling::TridiagonalMatrix& m) {
  double max_off2 = 1.0;
  for (const double e : m.offdiagonal) max_off2 = std::max(max_off2, e * e);
  return std::numeric_limits<double>::min() * max_off2;
}

// Per-row Gershgorin interval end points; tighter than the collapsed bound
// and only used to start the bisection.
void row_bounds(const sampling::TridiagonalMatrix& m, double* lo, double* hi) {
  const std::int64_t n = m.size();
  *lo = std::numeric_limits<double>::infinity();
  *hi = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(m.offdiagonal[i - 1]);
    if (i + 1 < n) r += std::fabs(m.offdiagonal[i]);
    *lo = std::min(*lo, m.diagonal[i] - r);
    *hi = std::max(*hi, m.diagonal[i] + r);
  }
}

}  // namespace

double rayleigh_lower(const sampling::TridiagonalMatrix& m) {
  check_matrix(m, 1, "rayleigh_lower");
  return *std::max_element(m.diagonal.begin(), m.diagonal.end());
}

double gershgorin_upper(const sampling::TridiagonalMatrix& m) {
  check_matrix(m, 2, "gershgorin_upper");
  const double max_diag = *std::max_element(m.diagonal.begin(), m.diagonal.end());
  const double max_off =
      *std::max_element(m.offdiagonal.begin(), m.offdiagonal.end());
  return max_diag + 2.0 * max_off;
}

std::int64_t sturm_count_below(const sampling::TridiagonalMatrix& m,
                               double sigma) {
  check_matrix(m, 1, "sturm_count_below");
  const std::int64_t n = m.size();
  const double pivmin = pivmin_of(m);
  std::int64_t count = 0;
  double d = m.diagonal[0] - sigma;
  if (std::fabs(d) <= pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::int64_t i = 1; i < n; ++i) {
    const double e = m.offdiagonal[i - 1];
    d = (m.diagonal[i] - sigma) - e * e / d;
    if (std::fabs(d) <= pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

double largest_eigenvalue(const sampling::TridiagonalMatrix& m, double tol) {
  check_matrix(m, 1, "largest_eigenvalue");
  const std::int64_t n = m.size();
  if (n == 1) return m.diagonal[0];
  if (tol <= 0.0)
    tol = 1e-10 * std::max(1.0, std::fabs(gershgorin_upper(m)));

  double row_lo, row_hi;
  row_bounds(m, &row_lo, &row_hi);
  double lo = *std::max_element(m.diagonal.begin(), m.diagonal.end());
  double hi = row_hi + 2.0 * tol;
  const double scale = std::max({std::fabs(row_lo), std::fabs(row_hi), 1.0});
  hi += scale * std::numeric_limits<double>::epsilon() * 4.0;

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at rounding resolution
    if (sturm_count_below(m, mid) == n)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

EigenExperiment lambda_max_scaling_experiment(
    const scaling::RegimeConfig& cfg, const std::vector<std::int64_t>& n_ladder,
    std::int64_t replicas, std::uint64_t master_seed, int threads) {
  cfg.validate();
  if (replicas < 1)
    throw std::invalid_argument("lambda_max_scaling_experiment: replicas >= 1");
  for (const std::int64_t n : n_ladder)
    if (n < 16)
      throw std::invalid_argument("lambda_max_scaling_experiment: n >= 16");

  EigenExperiment out;
  out.records.resize(n_ladder.size() * static_cast<std::size_t>(replicas));

  for (std::size_t level = 0; level < n_ladder.size(); ++level) {
    const std::int64_t n = n_ladder[level];
    const double beta = cfg.beta_at(n);
    const double root_log_n = std::sqrt(std::log(static_cast<double>(n)));
    EigenExperimentRecord* base = out.records.data() + level * replicas;
    par::for_chunks(replicas, 8, threads,
                    [&](std::int64_t, std::int64_t b, std::int64_t e) {
                      for (std::int64_t r = b; r < e; ++r) {
                        // replica codes partitioned by ladder level
                        const std::uint64_t rep_code =
                            static_cast<std::uint64_t>(level) << 32 |
                            static_cast<std::uint64_t>(r);
                        const sampling::TridiagonalMatrix m =
                            sampling::sample_tridiagonal(n, beta, master_seed,
                                                         rep_code);
                        EigenExperimentRecord& rec = base[r];
                        rec.n = n;
                        rec.replica = static_cast<std::uint64_t>(r);
                        rec.rayleigh_lower = rayleigh_lower(m);
                        rec.gershgorin_upper = gershgorin_upper(m);
                        rec.lambda_max = largest_eigenvalue(m);
                        rec.ratio = rec.lambda_max / root_log_n;
                      }
                    });
  }

  // envelope from the largest rung
  auto quantile = [](std::vector<double>& v, double p) {
    std::sort(v.begin(), v.end());
    const double idx = p * (static_cast<double>(v.size()) - 1.0);
    const std::size_t i0 = static_cast<std::size_t>(idx);
    const std::size_t i1 = std::min(i0 + 1, v.size() - 1);
    const double f = idx - static_cast<double>(i0);
    return v[i0] * (1.0 - f) + v[i1] * f;
  };

  const std::size_t last = n_ladder.size() - 1;
  {
    std::vector<double> ratios(replicas);
    for (std::int64_t r = 0; r < replicas; ++r)
      ratios[r] = out.records[last * replicas + r].ratio;
    std::vector<double> tmp = ratios;
    out.envelope_low = quantile(tmp, 0.005);
    tmp = ratios;
    out.envelope_high = quantile(tmp, 0.995);
  }

  for (std::size_t level = 0; level < n_ladder.size(); ++level) {
    std::vector<double> ratios(replicas);
    std::int64_t violations = 0;
    std::int64_t inside = 0;
    for (std::int64_t r = 0; r < replicas; ++r) {
      const EigenExperimentRecord& rec = out.records[level * replicas + r];
      ratios[r] = rec.ratio;
      const double slack =
          1e-9 * std::max(1.0, std::fabs(rec.gershgorin_upper));
      if (!(rec.rayleigh_lower <= rec.lambda_max + slack &&
            rec.lambda_max <= rec.gershgorin_upper + slack))
        ++violations;
      if (rec.ratio >= out.envelope_low && rec.ratio <= out.envelope_high)
        ++inside;
    }
    EigenLevelSummary s;
    s.n = n_ladder[level];
    std::vector<double> tmp = ratios;
    s.q005 = quantile(tmp, 0.005);
    tmp = ratios;
    s.q25 = quantile(tmp, 0.25);
    tmp = ratios;
    s.q50 = quantile(tmp, 0.50);
    tmp = ratios;
    s.q75 = quantile(tmp, 0.75);
    tmp = ratios;
    s.q995 = quantile(tmp, 0.995);
    s.fraction_in_envelope =
        static_cast<double>(inside) / static_cast<double>(replicas);
    s.sandwich_violations = violations;
    out.summary.push_back(s);
  }
  return out;
}

}  // namespace betax::eigen
