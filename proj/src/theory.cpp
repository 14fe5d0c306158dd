#include "betax/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betax/numeric.hpp"
#include "betax/parallel.hpp"
#include "betax/special_functions.hpp"

namespace betax::theory {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInf = std::numeric_limits<double>::infinity();

void check_survival_domain(std::int64_t n, double beta, double z) {
  if (n < 1) throw std::domain_error("survival_sum: n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("survival_sum: beta must be positive and finite");
  if (!(z >= 0.0) || !std::isfinite(z))
    throw std::domain_error("survival_sum: z must be >= 0 and finite");
  if (static_cast<double>(n) * beta >= 2.0)
    throw std::domain_error(
        "survival_sum: n beta must be < 2 (termwise bracket inapplicable)");
}

// Shared three-way reduction: exact term, bracket-low term, bracket-high
// term per index, chunk partials combined in chunk order.
struct TripleSums {
  double exact, low, high;
};

template <class LogHigh, class Exact>
TripleSums reduce_triple(std::int64_t n, int threads, LogHigh&& log_high,
                         Exact&& exact_term, double low_factor_num,
                         double low_shape_scale, double w) {
  const std::int64_t nchunks = (n + par::kSumChunk - 1) / par::kSumChunk;
  // Largest term decides whether plain compensated sums are representable.
  const bool use_logs = log_high(n) < -575.0;  // ln(1e-250)

  if (!use_logs) {
    std::vector<NeumaierSum> pe(nchunks), pl(nchunks), ph(nchunks);
    par::for_chunks(n, par::kSumChunk, threads,
                    [&](std::int64_t c, std::int64_t b, std::int64_t e) {
                      NeumaierSum se, sl, sh;
                      for (std::int64_t j = b; j < e; ++j) {
                        const std::int64_t i = j + 1;
                        const double hi = std::exp(log_high(i));
                        const double a = low_shape_scale * static_cast<double>(i);
                        se.add(exact_term(i));
                        sl.add(hi * (low_factor_num / (w + 1.0 - a)));
                        sh.add(hi);
                      }
                      pe[c] = se;
                      pl[c] = sl;
                      ph[c] = sh;
                    });
    NeumaierSum se, sl, sh;
    for (std::int64_t c = 0; c < nchunks; ++c) {
      se.add(pe[c]);
      sl.add(pl[c]);
      sh.add(ph[c]);
    }
    return {se.value(), sl.value(), sh.value()};
  }

  std::vector<LogSumExp> pe(nchunks), pl(nchunks), ph(nchunks);
  par::for_chunks(n, par::kSumChunk, threads,
                  [&](std::int64_t c, std::int64_t b, std::int64_t e) {
                    LogSumExp se, sl, sh;
                    for (std::int64_t j = b; j < e; ++j) {
                      const std::int64_t i = j + 1;
                      const double lh = log_high(i);
                      const double a = low_shape_scale * static_cast<double>(i);
                      se.add(exact_term(i));
                      sl.add(lh + std::log(low_factor_num / (w + 1.0 - a)));
                      sh.add(lh);
                    }
                    pe[c] = se;
                    pl[c] = sl;
                    ph[c] = sh;
                  });
  LogSumExp se, sl, sh;
  for (std::int64_t c = 0; c < nchunks; ++c) {
    se.add(pe[c]);
    sl.add(pl[c]);
    sh.add(ph[c]);
  }
  return {std::exp(se.value_log()), std::exp(sl.value_log()),
          std::exp(sh.value_log())};
}

double log_w_of(double z) { return std::log(0.5 * z * z); }

}  // namespace

SurvivalSumResult survival_sum(std::int64_t n, double beta, double z,
                               int threads) {
  check_survival_domain(n, beta, z);
  if (z == 0.0) {
    // every survival is 1; the analytic bracket degenerates to [0, inf)
    return {n, beta, z, static_cast<double>(n), 0.0, kInf, kNaN};
  }
  const double w = 0.5 * z * z;
  const double log_w = std::log(w);
  const double half_beta = 0.5 * beta;

  auto log_high = [&](std::int64_t i) {
    const double a = half_beta * static_cast<double>(i);
    return -w + (a - 1.0) * log_w - sf::log_gamma(a);
  };

  const bool use_logs = log_high(n) < -575.0;
  auto exact_term = [&](std::int64_t i) {
    const double a = half_beta * static_cast<double>(i);
    return use_logs ? sf::log_reg_upper_gamma(a, w) : sf::reg_upper_gamma(a, w);
  };

  const TripleSums s =
      reduce_triple(n, threads, log_high, exact_term, w, half_beta, w);
  return {n, beta, z, s.exact, s.low, s.high, kNaN};
}

SurvivalSumResult survival_sum_at(const scaling::RegimeConfig& cfg,
                                  std::int64_t n, double x, int threads) {
  cfg.validate();
  const scaling::ScalingPair pair = cfg.pair_at(n);
  SurvivalSumResult r =
      survival_sum(n, cfg.beta_at(n), scaling::phi(pair, x), threads);
  r.limit = limit_intensity(cfg.regime, x);
  return r;
}

double lambda_term(std::int64_t n, double beta, double z) {
  if (n < 1) throw std::domain_error("lambda_term: n must be >= 1");
  if (!(beta >= 0.0)) throw std::domain_error("lambda_term: beta must be >= 0");
  if (!(z > kSqrt2))
    throw std::domain_error("lambda_term: requires z > sqrt(2)");
  const double lw = log_w_of(z);
  const double t = 0.5 * static_cast<double>(n) * beta * lw;
  const double nu = 1.0 / static_cast<double>(n);
  if (std::fabs(t) < 1e-4) {
    // quartic expansion; truncation error O(t^5) ~ 1e-12 relative at t=1e-4
    const double c2 = 0.5 * (1.0 + nu);
    const double c3 = 1.0 / 3.0 + nu / 2.0 + nu * nu / 6.0;
    const double c4 = 0.125 + nu / 4.0 + nu * nu / 6.0 + nu * nu * nu / 24.0;
    return t * t * (c2 + t * (c3 + t * c4));
  }
  const long double lt = static_cast<long double>(t);
  const long double ln = static_cast<long double>(n);
  const long double v =
      expl(lt) * ln * expm1l(lt / ln) - expm1l(lt);
  return static_cast<double>(v);
}

double lambda_asymptotic(std::int64_t n, double beta, double z,
                         scaling::Regime regime) {
  if (regime != scaling::Regime::A && regime != scaling::Regime::B)
    throw std::domain_error("lambda_asymptotic: defined for regimes A and B only");
  const scaling::Classification c = scaling::classify_regime(n, beta);
  if (c.regime != regime)
    throw std::domain_error(
        std::string("lambda_asymptotic: (n, beta) classifies as regime ") +
        scaling::regime_name(c.regime) + ", not " + scaling::regime_name(regime));
  if (!(z > kSqrt2))
    throw std::domain_error("lambda_asymptotic: requires z > sqrt(2)");
  const double t = 0.5 * static_cast<double>(n) * beta * log_w_of(z);
  if (regime == scaling::Regime::A) return 0.5 * t * t;
  return t * std::exp(t);
}

double survival_sum_asymptotic(std::int64_t n, double beta, double z) {
  if (!(z > kSqrt2))
    throw std::domain_error("survival_sum_asymptotic: requires z > sqrt(2)");
  const double w = 0.5 * z * z;
  const double lw = std::log(w);
  const double lam = lambda_term(n, beta, z);
  return std::exp(-w + std::log(lam) - std::log(z * z * beta * lw * lw) +
                  std::log(4.0));
}

double weighted_geometric_sum(double u, std::int64_t n) {
  if (n < 1) throw std::domain_error("weighted_geometric_sum: n must be >= 1");
  if (!std::isfinite(u))
    throw std::domain_error("weighted_geometric_sum: u must be finite");
  const double nd = static_cast<double>(n);
  if (u == 1.0) return 0.5 * nd * (nd + 1.0);
  if (std::fabs(1.0 - u) < 1e-6) {
    NeumaierSum s;
    double uk = 1.0;
    for (std::int64_t k = 1; k <= n; ++k) {
      uk *= u;
      s.add(static_cast<double>(k) * uk);
    }
    return s.value();
  }
  const double omu = 1.0 - u;
  const double un1 = std::pow(u, static_cast<double>(n + 1));
  return ((nd * u - nd - 1.0) * un1 + u) / (omu * omu);
}

SplitSum split_sum_gamma(std::int64_t n, double gamma, double z, double mu,
                         int threads) {
  if (n < 1) throw std::domain_error("split_sum_gamma: n must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("split_sum_gamma: gamma must lie in (0,1)");
  if (!(mu > 0.0 && mu < 1.0))
    throw std::domain_error("split_sum_gamma: mu must lie in (0,1)");
  if (!(z > kSqrt2))
    throw std::domain_error("split_sum_gamma: requires z > sqrt(2)");

  const double w = 0.5 * z * z;
  const double log_w = std::log(w);
  const std::int64_t cut =
      static_cast<std::int64_t>(std::floor(static_cast<double>(n) * (1.0 - mu)));

  const std::int64_t nchunks = (n + par::kSumChunk - 1) / par::kSumChunk;
  std::vector<NeumaierSum> p1(nchunks), p2(nchunks);
  par::for_chunks(n, par::kSumChunk, threads,
                  [&](std::int64_t c, std::int64_t b, std::int64_t e) {
                    NeumaierSum s1, s2;
                    for (std::int64_t j = b; j < e; ++j) {
                      const std::int64_t i = j + 1;
                      const double a = gamma * static_cast<double>(i) /
                                       static_cast<double>(n);
                      const double term =
                          std::exp(-w + (a - 1.0) * log_w - sf::log_gamma(a));
                      if (i < cut)
                        s1.add(term);
                      else
                        s2.add(term);  // boundary index belongs to s2
                    }
                    p1[c] = s1;
                    p2[c] = s2;
                  });
  NeumaierSum s1, s2;
  for (std::int64_t c = 0; c < nchunks; ++c) {
    s1.add(p1[c]);
    s2.add(p2[c]);
  }
  return {s1.value(), s2.value()};
}

double limit_intensity(scaling::Regime regime, double x) {
  if (!std::isfinite(x))
    throw std::domain_error("limit_intensity: x must be finite");
  switch (regime) {
    case scaling::Regime::A: return std::exp(-x) / 4.0;
    case scaling::Regime::B:
    case scaling::Regime::C: return std::exp(-x);
    case scaling::Regime::Gaussian:
      throw std::domain_error("limit_intensity: defined for regimes A, B, C");
  }
  throw std::domain_error("limit_intensity: bad regime");
}

double uniform_negligibility_max(const scaling::RegimeConfig& cfg, double x,
                                 double y, int threads) {
  cfg.validate();
  if (!(y >= 0.0) || !(x >= y))
    throw std::domain_error("uniform_negligibility_max: requires 0 <= y <= x");
  if (x == y) return 0.0;
  (void)threads;
  const scaling::ScalingPair pair = cfg.pair_at(cfg.n);
  const double zx = scaling::phi(pair, x);
  const double zy = scaling::phi(pair, y);
  const double wx = 0.5 * zx * zx;
  const double wy = 0.5 * zy * zy;
  const double half_beta = 0.5 * cfg.beta_at(cfg.n);

  auto diff = [&](std::int64_t i) {
    const double a = half_beta * static_cast<double>(i);
    return sf::reg_upper_gamma(a, wy) - sf::reg_upper_gamma(a, wx);
  };

  const std::int64_t n = cfg.n;
  const std::int64_t stride = n <= 1'000'000 ? 1 : (n + 999'999) / 1'000'000;
  double best = 0.0;
  std::int64_t best_i = 1;
  for (std::int64_t i = 1; i <= n; i += stride) {
    const double d = diff(i);
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (stride > 1) {
    // the scan maximum is bracketed by an exhaustive pass around it
    const std::int64_t lo = std::max<std::int64_t>(1, best_i - stride);
    const std::int64_t hi = std::min<std::int64_t>(n, best_i + stride);
    for (std::int64_t i = lo; i <= hi; ++i) best = std::max(best, diff(i));
  }
  return best;
}

std::vector<ConvergenceRow> convergence_table(
    const scaling::RegimeConfig& cfg, const std::vector<std::int64_t>& n_ladder,
    const std::vector<double>& x_grid, int threads) {
  cfg.validate();
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_ladder.size() * x_grid.size());
  for (const std::int64_t n : n_ladder) {
    for (const double x : x_grid) {
      const SurvivalSumResult s = survival_sum_at(cfg, n, x, threads);
      rows.push_back({n, x, s.exact, s.bracket_low, s.bracket_high, s.limit,
                      s.exact / s.limit});
    }
  }
  return rows;
}

}  // namespace betax::theory
