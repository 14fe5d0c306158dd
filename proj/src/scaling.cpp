#include "betax/scaling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "betax/special_functions.hpp"

namespace betax::scaling {

namespace {

constexpr double kE = 2.71828182845904523536;
constexpr double kPi = 3.14159265358979323846;

void require_n(std::int64_t n, std::int64_t minimum, const char* where) {
  if (n < minimum) {
    std::ostringstream msg;
    msg << where << ": n must be >= " << minimum << ", got " << n;
    throw std::domain_error(msg.str());
  }
}

double loglog(double n) { return std::log(std::log(n)); }

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::A: return "A";
    case Regime::B: return "B";
    case Regime::C: return "C";
    case Regime::Gaussian: return "Gaussian";
  }
  return "?";
}

Regime regime_from_name(const std::string& name) {
  if (name == "A") return Regime::A;
  if (name == "B") return Regime::B;
  if (name == "C") return Regime::C;
  if (name == "Gaussian" || name == "gaussian") return Regime::Gaussian;
  throw std::invalid_argument("unknown regime '" + name + "'");
}

Classification classify_regime(std::int64_t n, double beta,
                               const ClassifyThresholds& th) {
  require_n(n, 16, "classify_regime");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("classify_regime: beta must be positive and finite");

  const double nd = static_cast<double>(n);
  RegimeDiagnostics d;
  d.n2_beta = nd * nd * beta;
  d.nbeta = nd * beta;
  d.nbeta_loglog = d.nbeta * loglog(nd);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (d.nbeta_loglog < th.theta_low) return {Regime::A, d, nan};
  if (d.nbeta >= th.c_band_low && d.nbeta <= th.c_band_high)
    return {Regime::C, d, 0.5 * d.nbeta};
  if (d.nbeta_loglog > th.theta_high && d.nbeta < th.c_band_low)
    return {Regime::B, d, nan};

  std::ostringstream msg;
  msg << "classify_regime: diagnostics fall between thresholds (n^2 beta = "
      << d.n2_beta << ", n beta loglog n = " << d.nbeta_loglog
      << ", n beta = " << d.nbeta << "); choose a regime explicitly";
  throw RegimeAmbiguityError(msg.str());
}

ScalingPair scaling_regime_A(std::int64_t n, double beta) {
  require_n(n, 1, "scaling_regime_A");
  if (!(beta > 0.0)) throw std::domain_error("scaling_regime_A: beta must be > 0");
  const double q = static_cast<double>(n) * static_cast<double>(n) * beta;
  if (q < kE)
    throw std::domain_error("scaling_regime_A: requires n^2 beta >= e");
  const double a = std::sqrt(2.0 * std::log(q));
  const double b = a - loglog(q) / a;
  return {a, b, Regime::A};
}

ScalingPair scaling_regime_B(std::int64_t n, double beta) {
  require_n(n, 16, "scaling_regime_B");
  if (!(beta >= 0.0)) throw std::domain_error("scaling_regime_B: beta must be >= 0");
  const double nd = static_cast<double>(n);
  const double a = std::sqrt(2.0 * std::log(nd));
  const double ll = loglog(nd);
  const double lll = std::log(ll);
  const double b = a + ((nd * beta / 2.0) * ll - ll - lll) / a;
  return {a, b, Regime::B};
}

ScalingPair scaling_regime_C(std::int64_t n, double gamma) {
  require_n(n, 16, "scaling_regime_C");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("scaling_regime_C: gamma must lie in (0,1)");
  const double nd = static_cast<double>(n);
  const double m = nd / (gamma * loglog(nd));
  if (!(m > std::exp(kE)))
    throw std::domain_error("scaling_regime_C: requires n/(gamma loglog n) > e^e");
  const double big_l = std::log(m);
  const double a = std::sqrt(2.0 * big_l);
  const double b = a + ((gamma - 1.0) * std::log(big_l) - sf::log_gamma(gamma)) / a;
  return {a, b, Regime::C};
}

ScalingPair scaling_gaussian(std::int64_t n) {
  require_n(n, 16, "scaling_gaussian");
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(std::log(nd));
  const double a = 2.0 * root;
  const double b = a - (loglog(nd) + std::log(4.0 * kPi)) / (2.0 * root);
  return {a, b, Regime::Gaussian};
}

double phi(const ScalingPair& pair, double x) { return x / pair.a_n + pair.b_n; }

double phi_inverse(const ScalingPair& pair, double v) {
  return pair.a_n * (v - pair.b_n);
}

void RegimeConfig::validate() const {
  if (n < 16) throw std::invalid_argument("RegimeConfig: n must be >= 16");
  switch (regime) {
    case Regime::A: {
      if (!(beta_exponent > 1.0 && beta_exponent < 2.0))
        throw std::invalid_argument(
            "RegimeConfig: regime A needs beta_exponent in (1,2)");
      const double q = std::pow(static_cast<double>(n), 2.0 - beta_exponent);
      if (q < kE)
        throw std::invalid_argument("RegimeConfig: regime A needs n^(2-p) >= e");
      break;
    }
    case Regime::B:
      if (!(loglog_exponent > 0.0 && loglog_exponent < 1.0))
        throw std::invalid_argument(
            "RegimeConfig: regime B needs loglog_exponent in (0,1)");
      break;
    case Regime::C: {
      if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("RegimeConfig: regime C needs gamma in (0,1)");
      const double m =
          static_cast<double>(n) / (gamma * loglog(static_cast<double>(n)));
      if (!(m > std::exp(kE)))
        throw std::invalid_argument(
            "RegimeConfig: regime C needs n/(gamma loglog n) > e^e");
      break;
    }
    case Regime::Gaussian:
      break;
  }
}

double RegimeConfig::beta_at(std::int64_t at_n) const {
  const double nd = static_cast<double>(at_n);
  switch (regime) {
    case Regime::A: return std::pow(nd, -beta_exponent);
    case Regime::B: return 1.0 / (nd * std::pow(loglog(nd), loglog_exponent));
    case Regime::C: return 2.0 * gamma / nd;
    case Regime::Gaussian:
      throw std::invalid_argument("RegimeConfig: Gaussian regime has no beta");
  }
  throw std::invalid_argument("RegimeConfig: bad regime");
}

ScalingPair RegimeConfig::pair_at(std::int64_t at_n) const {
  switch (regime) {
    case Regime::A: return scaling_regime_A(at_n, beta_at(at_n));
    case Regime::B: return scaling_regime_B(at_n, beta_at(at_n));
    case Regime::C: return scaling_regime_C(at_n, gamma);
    case Regime::Gaussian: return scaling_gaussian(at_n);
  }
  throw std::invalid_argument("RegimeConfig: bad regime");
}

}  // namespace betax::scaling
