#include "betax/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace betax::oracle {

namespace {

// Integrand scaled by e^z so values stay O(z^(a-1)) over the whole range:
// f(t) = t^(a-1) e^(z-t).
struct Integrand {
  double a, z;
  double operator()(double t) const {
    return std::exp((a - 1.0) * std::log(t) + (z - t));
  }
};

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive(const Integrand& f, double lo, double mid, double hi,
                double flo, double fmid, double fhi, double whole, double tol,
                int depth) {
  const double lm = 0.5 * (lo + mid);
  const double mh = 0.5 * (mid + hi);
  const double flm = f(lm);
  const double fmh = f(mh);
  const double left = simpson(lo, mid, flo, flm, fmid);
  const double right = simpson(mid, hi, fmid, fmh, fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, lo, lm, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         adaptive(f, mid, mh, hi, fmid, fmh, fhi, right, 0.5 * tol, depth - 1);
}

double integrate(const Integrand& f, double lo, double hi, double rel_tol) {
  // first pass scales the absolute tolerance; the integrand is positive so
  // the rough Simpson estimate is a usable magnitude
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo), fmid = f(mid), fhi = f(hi);
  const double rough = simpson(lo, hi, flo, fmid, fhi);
  const double tol = std::max(std::fabs(rough) * rel_tol, 1e-300);
  return adaptive(f, lo, mid, hi, flo, fmid, fhi, rough, tol, 48);
}

}  // namespace

double reg_upper_gamma_quadrature(double a, double z, double rel_tol) {
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("quadrature oracle: a must lie in (0,1)");
  if (!(z > 0.0)) throw std::domain_error("quadrature oracle: z must be > 0");
  // split near z where the power factor is steepest for small z
  const Integrand f{a, z};
  const double cut = std::min(z + 1.0, 2.0 * z);
  double integral = integrate(f, z, cut, rel_tol);
  if (cut < z + 60.0) integral += integrate(f, cut, z + 60.0, rel_tol);
  // tail beyond z+60 is below e^-60 relative to the integral
  return std::exp(std::log(integral) - z - std::lgamma(a));
}

double chi_survival_quadrature(double k, double x, double rel_tol) {
  return reg_upper_gamma_quadrature(0.5 * k, 0.5 * x * x, rel_tol);
}

namespace {

// det(x I - M) for symmetric tridiagonal M, dense LU with partial pivoting;
// deliberately ignores the tridiagonal recurrence the solver under test
// could share.
double char_poly(const std::vector<double>& diag, const std::vector<double>& off,
                 double x) {
  const std::size_t n = diag.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m[i * n + i] = x - diag[i];
    if (i + 1 < n) {
      m[i * n + i + 1] = -off[i];
      m[(i + 1) * n + i] = -off[i];
    }
  }
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r * n + col]) > std::fabs(m[piv * n + col])) piv = r;
    if (m[piv * n + col] == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t c = col; c < n; ++c)
        std::swap(m[piv * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = m[r * n + col] / m[col * n + col];
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= factor * m[col * n + c];
    }
  }
  return det;
}

}  // namespace

double largest_eigenvalue_dense(const std::vector<double>& diag,
                                const std::vector<double>& off, double tol) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::domain_error("dense oracle: empty matrix");
  if (n == 1) return diag[0];
  if (off.size() + 1 != n)
    throw std::domain_error("dense oracle: offdiagonal length must be n-1");

  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(off[i - 1]);
    if (i + 1 < n) r += std::fabs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double span = std::max(hi - lo, 1.0);
  double upper = hi + 1e-8 * span;  // char_poly > 0 above all roots
  // scan down until the polynomial changes sign
  const int steps = 20000;
  const double step = (upper - lo) / steps;
  double right = upper;
  double fr = char_poly(diag, off, right);
  if (fr <= 0.0) throw std::runtime_error("dense oracle: bad upper bracket");
  double left = right;
  double fl = fr;
  for (int i = 0; i < steps + 2; ++i) {
    left = right - step;
    fl = char_poly(diag, off, left);
    if (fl <= 0.0) break;
    right = left;
    fr = fl;
  }
  if (fl > 0.0) throw std::runtime_error("dense oracle: no sign change found");
  while (right - left > tol) {
    const double mid = 0.5 * (left + right);
    if (mid <= left || mid >= right) break;
    if (char_poly(diag, off, mid) > 0.0)
      right = mid;
    else
      left = mid;
  }
  return 0.5 * (left + right);
}

}  // namespace betax::oracle
