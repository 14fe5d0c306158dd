#pragma once

#include <vector>

namespace betax::oracle {

// Reference evaluations kept independent of the production series/continued
// fraction path; used by the test suites and the bounds-check command.

/// Q(a,z) by adaptive Simpson quadrature of t^(a-1) e^-t over (z, z+60],
/// normalized by Gamma(a).  Valid for 0 < a < 1 (monotone integrand tail).
double reg_upper_gamma_quadrature(double a, double z, double rel_tol = 1e-11);

/// P(chi(k) >= x) through the quadrature path.
double chi_survival_quadrature(double k, double x, double rel_tol = 1e-11);

/// Largest eigenvalue of a small symmetric tridiagonal matrix via the
/// characteristic polynomial: det(xI - M) by dense LU, largest root
/// bracketed by a downward scan and bisected.
double largest_eigenvalue_dense(const std::vector<double>& diag,
                                const std::vector<double>& off,
                                double tol = 1e-11);

}  // namespace betax::oracle
