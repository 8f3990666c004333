#pragma once

// Adaptive Simpson quadrature with the usual S(a,m)+S(m,b) Richardson error
// estimate. Integrands here are C^1, so plain recursion converges quickly.

#include <cmath>

namespace bounce {

namespace detail {

template <class F>
double simpson_rec(F& fn, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  return simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Signed integral over [a,b]; a > b integrates backwards.
template <class F>
double integrate(F fn, double a, double b, double tol = 1e-10) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return sign * detail::simpson_rec(fn, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace bounce
