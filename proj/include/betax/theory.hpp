#pragma once

#include <cstdint>
#include <vector>

#include "betax/scaling.hpp"

namespace betax::theory {

/// Exact survival sum S_n(z) = sum_{i=1..n} P(chi(i beta) >= z) together
/// with the termwise analytic bracket (valid while n beta < 2 so every
/// shape i beta/2 stays below 1).
struct SurvivalSumResult {
  std::int64_t n;
  double beta;
  double z;
  double exact;
  double bracket_low;
  double bracket_high;
  double limit;  // G(x) when built through survival_sum_at, NaN otherwise
};

SurvivalSumResult survival_sum(std::int64_t n, double beta, double z,
                               int threads = 0);

/// Same sum evaluated at z = phi_n(x) for the configured regime; fills the
/// limit field with the regime intensity G(x).
SurvivalSumResult survival_sum_at(const scaling::RegimeConfig& cfg,
                                  std::int64_t n, double x, int threads = 0);

/// Lambda_n(z) = n ((z^2/2)^(beta/2) - 1)(z^2/2)^(n beta/2)
///               - (z^2/2)^(n beta/2) + 1, evaluated cancellation-free.
double lambda_term(std::int64_t n, double beta, double z);

/// Leading-order form of Lambda_n without its (1+o(1)) factor.
/// Regime A: (1/2)((n beta/2) log(z^2/2))^2.
/// Regime B: (z^2/2)^(n beta/2) (n beta/2) log(z^2/2).
/// Throws when classify_regime(n, beta) disagrees with the requested regime.
double lambda_asymptotic(std::int64_t n, double beta, double z,
                         scaling::Regime regime);

/// The survival-sum asymptotic with the exact Lambda_n inserted:
///   4 e^{-z^2/2} Lambda_n(z) / (z^2 beta log^2(z^2/2)).
double survival_sum_asymptotic(std::int64_t n, double beta, double z);

/// sum_{k=1..n} k u^k; closed form away from u = 1, direct summation inside
/// |1-u| < 1e-6, exact n(n+1)/2 at u = 1.
double weighted_geometric_sum(double u, std::int64_t n);

/// Partial sums of the upper-bound expression e^{-w} w^{gamma i/n - 1} /
/// Gamma(gamma i/n), w = z^2/2, split at floor(n(1-mu)) with the boundary
/// term assigned to s2.  s1 + s2 equals survival_sum(...).bracket_high.
struct SplitSum {
  double s1;
  double s2;
};
SplitSum split_sum_gamma(std::int64_t n, double gamma, double z, double mu,
                         int threads = 0);

/// Limit intensity G(x): e^{-x}/4 in regime A, e^{-x} in regimes B and C.
double limit_intensity(scaling::Regime regime, double x);

/// max_i |P(X_{i,n} >= phi_n(x)) - P(X_{i,n} >= phi_n(y))| for 0 <= y < x;
/// exhaustive for n <= 1e6, stride scan with local refinement above.
double uniform_negligibility_max(const scaling::RegimeConfig& cfg, double x,
                                 double y, int threads = 0);

struct ConvergenceRow {
  std::int64_t n;
  double x;
  double s_exact;
  double s_low;
  double s_high;
  double g_limit;
  double ratio;  // s_exact / g_limit
};

std::vector<ConvergenceRow> convergence_table(
    const scaling::RegimeConfig& cfg, const std::vector<std::int64_t>& n_ladder,
    const std::vector<double>& x_grid, int threads = 0);

}  // namespace betax::theory
