#pragma once

// The modified generating function. The twist kernel D blends d12h into the
// constant delta across the strip [K-eps, K] via a smooth plateau cutoff, and
// the partials of the extension solve the characteristic Cauchy problem with
// data on the line t1 = t0 + K:
//   d1h~(t0,t1) = d1h(t0,t0+K) + int_{t0+K}^{t1} D(t0,tau) dtau
//   d2h~(t0,t1) = d2h(t1-K,t1) + int_{t1-K}^{t0} D(s,t1) ds
// Above the strip both collapse to the closed-form boundary data; below it
// they are affine with slope delta plus a periodic strip integral.

#include <cmath>
#include <string>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/forcing.hpp"
#include "bounce/generating.hpp"
#include "bounce/quadrature.hpp"
#include "bounce/rootfind.hpp"

namespace bounce {

enum class Region { sigma_plus, sigma_zero, sigma_minus };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::sigma_plus: return "sigma_plus";
    case Region::sigma_zero: return "sigma_zero";
    case Region::sigma_minus: return "sigma_minus";
  }
  return "?";
}

struct ExtendedState {
  double t1;
  double E1;
  Region region;
};

class ExtensionField {
 public:
  ExtensionField(ForcingSpec spec, ConstantsBundle consts, double quad_tol = 1e-10)
      : spec_(std::move(spec)), consts_(std::move(consts)), quad_tol_(quad_tol) {}

  const ForcingSpec& spec() const { return spec_; }
  const ConstantsBundle& consts() const { return consts_; }

  // C^inf plateau cutoff on the gap axis: 0 below K - 3eps/4, 1 above K - eps/4.
  double psi(double gap) const {
    const double K = consts_.K, eps = consts_.eps;
    const double y = (gap - (K - 0.75 * eps)) / (0.5 * eps);
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / y);
    const double b = std::exp(-1.0 / (1.0 - y));
    return a / (a + b);
  }

  double D(double t0, double t1) const {
    const double gap = t1 - t0;
    const double p = psi(gap);
    if (p == 0.0) return consts_.delta;
    const double tw = twist_partial(spec_, t0, t1);
    if (p == 1.0) return tw;
    return p * tw + (1.0 - p) * consts_.delta;
  }

  double d1(double t0, double t1) const {
    const double K = consts_.K, eps = consts_.eps, delta = consts_.delta;
    if (t1 - t0 >= K) return detail::boundary_data_raw(spec_, t0, t1).E0;
    const double base = detail::boundary_data_raw(spec_, t0, t0 + K).E0;
    if (t1 <= t0 + K - eps)
      return base - strip_integral_lower(t0) - delta * ((t0 + K - eps) - t1);
    return base - integrate([&](double tau) { return D(t0, tau); }, t1, t0 + K, quad_tol_);
  }

  double d2(double t0, double t1) const {
    const double K = consts_.K, eps = consts_.eps, delta = consts_.delta;
    if (t1 - t0 >= K) return -detail::boundary_data_raw(spec_, t0, t1).E1;
    const double base = -detail::boundary_data_raw(spec_, t1 - K, t1).E1;
    if (t0 >= t1 - K + eps)
      return base + strip_integral_upper(t1) + delta * (t0 - (t1 - K + eps));
    return base + integrate([&](double s) { return D(s, t1); }, t1 - K, t0, quad_tol_);
  }

  // int_{t0+K-eps}^{t0+K} D(t0, tau) dtau, 1-periodic in t0.
  double strip_integral_lower(double t0) const {
    return integrate([&](double tau) { return D(t0, tau); }, t0 + consts_.K - consts_.eps,
                     t0 + consts_.K, quad_tol_);
  }

  // int_{t1-K}^{t1-K+eps} D(s, t1) ds, 1-periodic in t1.
  double strip_integral_upper(double t1) const {
    return integrate([&](double s) { return D(s, t1); }, t1 - consts_.K,
                     t1 - consts_.K + consts_.eps, quad_tol_);
  }

  double delta_tilde(double a, double b, double c) const { return d2(a, b) + d1(b, c); }

  double alpha(double t0) const { return d1(t0, t0 + consts_.K - consts_.eps); }
  double beta(double t0) const { return detail::boundary_data_raw(spec_, t0, t0 + consts_.K).E0; }

  // Solves E0 = d1h~(t0, .) for the image time (d1h~ is strictly increasing in
  // t1) and reads the image energy off d2h~.
  ExtendedState step_extended(double t0, double E0) const {
    const double g = spec_.g();
    const double K = consts_.K, eps = consts_.eps, delta = consts_.delta;
    const double b = beta(t0);
    double t1;
    Region region;
    if (E0 > b) {
      region = Region::sigma_plus;
      const double v0 = std::sqrt(2.0 * E0);
      double hi =
          t0 + (2.0 / g) * (v0 + spec_.max_abs_fdot() + 2.0 * spec_.max_abs_f() / K) + 1.0;
      auto fn = [&](double t) { return detail::boundary_data_raw(spec_, t0, t).E0 - E0; };
      for (int grow = 0; grow < 8 && fn(hi) <= 0.0; ++grow) hi = t0 + 2.0 * (hi - t0);
      auto dfn = [&](double t) { return twist_partial(spec_, t0, t); };
      t1 = newton_bisect(fn, dfn, t0 + K, hi, 1e-11, 200, "extension", "step_extended");
    } else {
      const double a = alpha(t0);
      if (E0 >= a) {
        region = Region::sigma_zero;
        auto fn = [&](double t) { return d1(t0, t) - E0; };
        auto dfn = [&](double t) { return D(t0, t); };
        t1 = newton_bisect(fn, dfn, t0 + K - eps, t0 + K, 1e-11, 200, "extension",
                           "step_extended");
      } else {
        region = Region::sigma_minus;
        // affine branch: d1 = base - I1 - delta ((t0+K-eps) - t1)
        const double base = detail::boundary_data_raw(spec_, t0, t0 + K).E0;
        t1 = (E0 - base + strip_integral_lower(t0)) / delta + (t0 + K - eps);
      }
    }
    return {t1, -d2(t0, t1), region};
  }

 private:
  ForcingSpec spec_;
  ConstantsBundle consts_;
  double quad_tol_;
};

// Conservative gap-growth constant, the max of three regimes:
//  (i)  the h = h~ region, where consecutive gaps differ by
//       F = (4/g) f'(t1) - (2/g) f[t1,t0] - (2/g) f[t2,t1];
//  (ii) the compact strip, swept with the extended map;
//  (iii) the flat region, where the quadrature extension drifts gaps by
//       (Delta(t1-K,t1,t1+K) + I_upper(t1) - I_lower(t1)) / delta.
// Floored at 0.1 so the integrable case stays usable downstream.
inline double estimate_C(const ExtensionField& field) {
  const ForcingSpec& spec = field.spec();
  const ConstantsBundle& c = field.consts();
  const double g = spec.g();
  const double term_flight = (4.0 / g) * spec.max_abs_fdot() + (8.0 / g) * spec.max_abs_f() / c.K;

  double term_strip = 0.0;
  const double dgap = c.eps / 50.0;
  for (int i = 0; i < 100; ++i) {
    const double t0 = static_cast<double>(i) / 100.0;
    for (double gap = c.K - c.eps; gap <= c.K + 0.5 * dgap; gap += dgap) {
      const double t1 = t0 + gap;
      const double E1 = -field.d2(t0, t1);
      const auto next = field.step_extended(t1, E1);
      const double s = std::abs(std::abs(next.t1 - t1) - std::abs(t1 - t0));
      term_strip = std::max(term_strip, s);
    }
  }

  double term_flat = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t1 = static_cast<double>(i) / 200.0;
    const double dk = delta_rec(t1 - c.K, t1, t1 + c.K, spec, c);
    const double drift =
        std::abs(dk + field.strip_integral_upper(t1) - field.strip_integral_lower(t1)) / c.delta;
    term_flat = std::max(term_flat, drift);
  }

  return std::max({0.1, term_flight, term_strip, term_flat});
}

}  // namespace bounce
