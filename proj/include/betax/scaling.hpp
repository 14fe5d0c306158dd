#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace betax::scaling {

enum class Regime { A, B, C, Gaussian };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

/// Affine normalization phi_n(x) = x/a_n + b_n.
struct ScalingPair {
  double a_n;
  double b_n;
  Regime regime;
};

/// Dimensionless quantities that separate the temperature regimes at
/// finite n: n^2 beta, n beta loglog(n), n beta.
struct RegimeDiagnostics {
  double n2_beta;
  double nbeta_loglog;
  double nbeta;
};

struct Classification {
  Regime regime;
  RegimeDiagnostics diag;
  double gamma_hint;  // nbeta/2 when regime == C, NaN otherwise
};

/// The regimes are asymptotic separations, so any finite-n classification
/// needs declared cutoffs.  A: nbeta loglog(n) below theta_low.  C: nbeta
/// within an order-one band of a constant 2*gamma in (0,2).  B: nbeta
/// loglog(n) above theta_high with nbeta still small.
struct ClassifyThresholds {
  double theta_low = 0.1;
  double theta_high = 1.0;
  double c_band_low = 0.8;
  double c_band_high = 1.95;
};

class RegimeAmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws RegimeAmbiguityError when the diagnostics fall between the
/// thresholds; the caller must then pick a regime explicitly.
Classification classify_regime(std::int64_t n, double beta,
                               const ClassifyThresholds& th = {});

/// a_n = sqrt(2 log(n^2 beta)), b_n = a_n - loglog(n^2 beta)/a_n.
/// Requires n^2 beta >= e.
ScalingPair scaling_regime_A(std::int64_t n, double beta);

/// a_n = sqrt(2 log n),
/// b_n = a_n + ((n beta/2) loglog n - loglog n - logloglog n)/a_n.
ScalingPair scaling_regime_B(std::int64_t n, double beta);

/// With m = n/(gamma loglog n) and L = log m:
/// a_n = sqrt(2L), b_n = a_n + ((gamma-1) log L - logGamma(gamma))/a_n.
/// This is also the Gumbel pair for m i.i.d. chi(2 gamma) variables.
ScalingPair scaling_regime_C(std::int64_t n, double gamma);

/// a_n = 2 sqrt(log n), b_n = a_n - (loglog n + log 4pi)/(2 sqrt(log n));
/// the comparison pair for the N(0,2) diagonal.
ScalingPair scaling_gaussian(std::int64_t n);

double phi(const ScalingPair& pair, double x);
double phi_inverse(const ScalingPair& pair, double v);

/// A temperature regime plus the parameter fixing beta as a function of n:
/// A: beta = n^-p, 1 < p < 2; B: beta = 1/(n (loglog n)^eta), 0 < eta < 1;
/// C: beta = 2 gamma/n, 0 < gamma < 1.
struct RegimeConfig {
  Regime regime = Regime::C;
  std::int64_t n = 1'000'000;
  double beta_exponent = 1.5;
  double loglog_exponent = 0.5;
  double gamma = 0.5;

  void validate() const;  // throws std::invalid_argument
  double beta_at(std::int64_t n) const;
  ScalingPair pair_at(std::int64_t n) const;
};

}  // namespace betax::scaling
