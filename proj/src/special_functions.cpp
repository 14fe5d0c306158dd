#include "betax/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betax::sf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;

double lgamma_pos(double a) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(a, &sign);  // reentrant; a > 0 so sign is +1
#else
  return std::lgamma(a);
#endif
}

// ln Gamma(1+a) with full relative accuracy near the zero at a = 0, where
// libm lgamma is only absolutely accurate.  Taylor coefficients zeta(k)/k.
double lgamma1p(double a) {
  if (std::fabs(a) >= 0.02) return lgamma_pos(1.0 + a);
  constexpr double z2 = 0.82246703342411321824;   // zeta(2)/2
  constexpr double z3 = 0.40068563438653142847;   // zeta(3)/3
  constexpr double z4 = 0.27058080842778454788;   // zeta(4)/4
  constexpr double z5 = 0.20738555102867398527;   // zeta(5)/5
  constexpr double z6 = 0.16955717699740818995;   // zeta(6)/6
  constexpr double z7 = 0.14404989676884611812;   // zeta(7)/7
  return a * (-euler_gamma +
              a * (z2 + a * (-z3 + a * (z4 + a * (-z5 + a * (z6 + a * (-z7)))))));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::domain_error(std::string(what) + " must be finite");
}

struct QResult {
  double q;
  double log_q;
};

// Lower regularized series P(a,w) = w^a e^-w / Gamma(a+1) * sum_k w^k / prod(a+j).
// All terms positive; the exponent is taken in log form so arguments far
// below DBL_MIN still work (w == 0 is the degenerate leading term).
double reg_lower_series(double a, double w, double log_w) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 10000; ++k) {
    term *= w / (a + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  const double lead = (w == 0.0) ? a * log_w - lgamma_pos(a + 1.0)
                                 : a * log_w - w - lgamma_pos(a + 1.0);
  return std::exp(lead) * sum;
}

// Lentz continued fraction for the upper tail, valid for w >= a+1.
// Returns the CF factor h with Q = exp(-w + a ln w - lnGamma(a)) * h.
double upper_cf(double a, double w) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = w + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 50000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) return h;
  }
  throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

// Q(a,w) for a <= 0.35 and w < a+1, free of the 1-P cancellation:
//   Gamma(a,w) = [expm1(lnGamma(1+a)) - expm1(a ln w)]/a
//                - w^a * sum_{k>=1} (-w)^k / (k! (a+k)).
QResult reg_upper_small_a(double a, double w, double log_w) {
  const double head = (std::expm1(lgamma1p(a)) - std::expm1(a * log_w)) / a;
  double term = 1.0;
  double tail = 0.0;
  for (int k = 1; k < 2000; ++k) {
    term *= -w / k;
    const double add = term / (a + k);
    tail += add;
    if (std::fabs(add) < (std::fabs(tail) + 1e-300) * 1e-17) break;
  }
  const double upper = head - std::exp(a * log_w) * tail;  // = Gamma(a,w)
  const double log_q = std::log(a) + std::log(upper) - lgamma1p(a);
  return {std::exp(log_q), log_q};
}

QResult reg_upper_core(double a, double w, double log_w) {
  if (w == 0.0) return {1.0, 0.0};
  if (w < a + 1.0) {
    if (a <= 0.35) return reg_upper_small_a(a, w, log_w);
    const double p = reg_lower_series(a, w, log_w);
    return {1.0 - p, std::log1p(-p)};
  }
  const double h = upper_cf(a, w);
  const double log_q = -w + a * log_w - lgamma_pos(a) + std::log(h);
  return {std::exp(log_q), log_q};
}

QResult reg_upper_checked(double a, double z) {
  require_finite(a, "shape");
  require_finite(z, "argument");
  if (a <= 0.0) throw std::domain_error("reg_upper_gamma: shape must be > 0");
  if (z < 0.0) throw std::domain_error("reg_upper_gamma: argument must be >= 0");
  if (z == 0.0) return {1.0, 0.0};
  return reg_upper_core(a, z, std::log(z));
}

// chi threshold -> gamma argument; uses the log form when x is so small
// that x*x would underflow.
void chi_arg(double x, double* w, double* log_w) {
  if (x > 1e-140) {
    *w = 0.5 * x * x;
    *log_w = std::log(*w);
  } else if (x > 0.0) {
    *log_w = 2.0 * std::log(x) - kLn2;
    *w = std::exp(*log_w);
  } else {
    *w = 0.0;
    *log_w = -std::numeric_limits<double>::infinity();
  }
}

QResult chi_survival_core(double k, double x) {
  require_finite(k, "degrees of freedom");
  require_finite(x, "threshold");
  if (k <= 0.0) throw std::domain_error("chi_survival: degrees of freedom must be > 0");
  if (x < 0.0) throw std::domain_error("chi_survival: threshold must be >= 0");
  if (x == 0.0) return {1.0, 0.0};
  double w, log_w;
  chi_arg(x, &w, &log_w);
  return reg_upper_core(0.5 * k, w, log_w);
}

double chi_cdf_core(double k, double w, double log_w) {
  require_finite(k, "degrees of freedom");
  if (k <= 0.0) throw std::domain_error("chi_cdf: degrees of freedom must be > 0");
  const double a = 0.5 * k;
  if (w < a + 1.0) return reg_lower_series(a, w, log_w);
  return 1.0 - reg_upper_core(a, w, log_w).q;
}

}  // namespace

double log_gamma(double a) {
  require_finite(a, "shape");
  if (a <= 0.0) throw std::domain_error("log_gamma: shape must be > 0");
  return lgamma_pos(a);
}

double reg_upper_gamma(double a, double z) { return reg_upper_checked(a, z).q; }

double log_reg_upper_gamma(double a, double z) { return reg_upper_checked(a, z).log_q; }

double chi_survival(double k, double x) { return chi_survival_core(k, x).q; }

double log_chi_survival(double k, double x) { return chi_survival_core(k, x).log_q; }

double chi_cdf(double k, double x) {
  require_finite(x, "threshold");
  if (x < 0.0) throw std::domain_error("chi_cdf: threshold must be >= 0");
  if (x == 0.0) return 0.0;
  double w, log_w;
  chi_arg(x, &w, &log_w);
  return chi_cdf_core(k, w, log_w);
}

double chi_cdf_at_log(double k, double log_x) {
  require_finite(log_x, "log threshold");
  const double log_w = 2.0 * log_x - kLn2;
  return chi_cdf_core(k, std::exp(log_w), log_w);
}

GammaBracket incomplete_gamma_bounds(double a, double z) {
  require_finite(a, "shape");
  require_finite(z, "argument");
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("incomplete_gamma_bounds: shape must lie in (0,1)");
  if (!(z > 0.0))
    throw std::domain_error("incomplete_gamma_bounds: argument must be > 0");
  const double log_upper = -z + (a - 1.0) * std::log(z) - lgamma_pos(a);
  const double upper = std::exp(log_upper);
  const double lower = upper * (z / (z + 1.0 - a));
  return {lower, upper, a, z};
}

double gamma_small_expansion(double u) {
  require_finite(u, "argument");
  if (!(u > 0.0 && u < 0.5))
    throw std::domain_error("gamma_small_expansion: argument must lie in (0, 0.5)");
  const double linear_coef = (6.0 * euler_gamma * euler_gamma + kPi * kPi) / 12.0;
  return 1.0 / u - euler_gamma + linear_coef * u;
}

}  // namespace betax::sf
