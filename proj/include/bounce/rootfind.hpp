#pragma once

// Scalar root finding: plain bisection and a Newton iteration that keeps a
// bisection bracket as safeguard.

#include <cmath>
#include <cstdint>
#include <functional>

#include "bounce/errors.hpp"

namespace bounce {

template <class F>
double bisect(F fn, double a, double b, double xtol) {
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw Error(ErrorKind::ConvergenceError, "rootfind", "bisect", "no sign change in bracket");
  for (int i = 0; i < 200 && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

// Root of fn inside [a,b] (fn(a) and fn(b) of opposite sign). Newton steps use
// `dfn`; whenever a step leaves the bracket or stalls, fall back to the
// midpoint. Stops when |fn| < ftol. max_iter mirrors the caller's budget.
template <class F, class DF>
double newton_bisect(F fn, DF dfn, double a, double b, double ftol, int max_iter,
                     const char* module, const char* op) {
  double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw Error(ErrorKind::ConvergenceError, module, op, "root bracket lost");
  double x = 0.5 * (a + b);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = fn(x);
    if (std::abs(fx) < ftol) return x;
    if (fa * fx < 0.0) {
      b = x;
      fb = fx;
    } else {
      a = x;
      fa = fx;
    }
    const double d = dfn(x);
    double next = d != 0.0 ? x - fx / d : a - 1.0;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    x = next;
  }
  throw Error(ErrorKind::ConvergenceError, module, op, "root iteration budget exceeded");
}

}  // namespace bounce
