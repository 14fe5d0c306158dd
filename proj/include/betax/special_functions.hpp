#pragma once

namespace betax::sf {

inline constexpr double euler_gamma = 0.57721566490153286061;

/// ln Gamma(a) for a > 0.  Throws std::domain_error otherwise.
double log_gamma(double a);

/// Regularized upper incomplete gamma Q(a,z) = P(Gamma(a,1) >= z) in [0,1].
/// Series below z = a+1, Lentz continued fraction above, carried in log
/// space so results far below DBL_MIN are still meaningful through
/// log_reg_upper_gamma.
double reg_upper_gamma(double a, double z);
double log_reg_upper_gamma(double a, double z);

/// P(chi(k) >= x) = Q(k/2, x^2/2).
double chi_survival(double k, double x);
double log_chi_survival(double k, double x);

/// P(chi(k) <= x); chi_cdf_at_log takes ln(x) so sub-denormal quantiles of
/// tiny-k chi laws stay representable.
double chi_cdf(double k, double x);
double chi_cdf_at_log(double k, double log_x);

/// Two-sided analytic bracket for Q(a,z), valid for 0 < a < 1, z > 0:
///   z/(z+1-a) * e^-z z^(a-1)/Gamma(a)  <  Q(a,z)  <=  e^-z z^(a-1)/Gamma(a).
/// Returned unclamped: upper may exceed 1 for small z.
struct GammaBracket {
  double lower;
  double upper;
  double a;
  double z;
};
GammaBracket incomplete_gamma_bounds(double a, double z);

/// Three-term expansion of Gamma(u) near 0:
///   1/u - euler_gamma + ((6 euler_gamma^2 + pi^2)/12) u.
/// Cross-check helper only; domain (0, 0.5).
double gamma_small_expansion(double u);

}  // namespace betax::sf
