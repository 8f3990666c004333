#pragma once

// The exact impact map P in (t, v) coordinates:
//   t1 = t0 + (2/g) v0 - (2/g) f[t1,t0] + (2/g) f'(t0)   (implicit in t1)
//   v1 = v0 + f'(t1) - 2 f[t1,t0] + f'(t0)
// plus an independent free-flight oracle that simulates the ball against the
// racket graph directly.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/forcing.hpp"
#include "bounce/rootfind.hpp"

namespace bounce {

struct ImpactState {
  double t = 0.0;
  double v = 0.0;  // post-impact velocity relative to the racket
  double energy() const { return 0.5 * v * v; }
};

// Next impact. The implicit equation is solved as a fixed point around the
// explicit first guess t0 + (2/g)(v0 + f'(t0)); for gaps above K1 the residual
// is monotone in t1 so the safeguarded Newton keeps a genuine bracket.
inline ImpactState step(const ImpactState& state, const ForcingSpec& spec,
                        const ConstantsBundle& consts) {
  const double g = spec.g();
  if (!(state.v > consts.v_bar))
    throw Error(ErrorKind::DomainError, "impact_map", "step",
                "velocity " + std::to_string(state.v) + " below v_bar");
  const double t0 = state.t;
  const double fdot0 = spec.eval(t0).fdot;
  const double guess = t0 + (2.0 / g) * (state.v + fdot0);
  auto residual = [&](double t1) {
    return t1 - t0 - (2.0 / g) * (state.v + fdot0) + (2.0 / g) * divided_difference(spec, t0, t1);
  };
  auto dresidual = [&](double t1) {
    const double gap = t1 - t0;
    const double dd = divided_difference(spec, t0, t1);
    return 1.0 + (2.0 / g) * (spec.eval(t1).fdot - dd) / gap;
  };
  // correction term is bounded by (2/g) * 2 max|f| / gap
  double w = 4.0 * spec.max_abs_f() * (2.0 / g) / std::max(consts.K1, 1e-6);
  w = std::max(w, 1e-9);
  double a = guess - w, b = guess + w;
  for (int grow = 0; grow < 8 && residual(a) * residual(b) > 0.0; ++grow) {
    w *= 2.0;
    a = guess - w;
    b = guess + w;
  }
  const double t1 = newton_bisect(residual, dresidual, a, b, 1e-11, 200, "impact_map", "step");
  const double v1 =
      state.v + spec.eval(t1).fdot - 2.0 * divided_difference(spec, t0, t1) + fdot0;
  return {t1, v1};
}

// n forward steps; returns n+1 states. Step failures are rethrown with the
// failing index attached.
inline std::vector<ImpactState> iterate(const ImpactState& state, std::int64_t n,
                                        const ForcingSpec& spec, const ConstantsBundle& consts) {
  std::vector<ImpactState> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(state);
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      orbit.push_back(step(orbit.back(), spec, consts));
    } catch (const Error& e) {
      throw Error(e.kind(), "impact_map", "iterate",
                  "step " + std::to_string(i) + " failed: " + e.what());
    }
  }
  return orbit;
}

// Free-flight oracle: integrate x(t) = f(t0) + (v0 + f'(t0))(t-t0) - g/2 (t-t0)^2
// and find the first crossing of the racket graph by dense bracketing at step
// 1e-3, refined by bisection. While the ballistic clearance above the racket
// band exceeds 2 max|f| no crossing is possible, so that stretch is skipped.
inline ImpactState free_flight_oracle(const ImpactState& state, const ForcingSpec& spec) {
  const double g = spec.g();
  if (!(state.v > 0.0))
    throw Error(ErrorKind::DomainError, "impact_map", "free_flight_oracle", "need v > 0");
  const double t0 = state.t;
  const double f0 = spec.eval(t0).f;
  const double u = state.v + spec.eval(t0).fdot;  // absolute launch velocity
  auto height = [&](double tau) { return f0 + u * tau - 0.5 * g * tau * tau - spec.eval(t0 + tau).f; };
  const double horizon = 10.0 * (2.0 * state.v / g);
  const double step_tau = 1e-3;
  const double band = 2.0 * spec.max_abs_f();

  double tau_prev = 0.0;
  double h_prev = 0.0;  // height(0) = 0 by construction
  double tau = step_tau;
  double root_lo = -1.0, root_hi = -1.0;
  while (tau <= horizon) {
    // quadratic clearance test: f0 + u tau - g/2 tau^2 - f(t) >= quad - band
    const double quad = u * tau - 0.5 * g * tau * tau;
    if (tau > step_tau && quad > band + 1e-9) {
      // skip ahead to where the parabola re-enters the racket band
      const double disc = u * u - 2.0 * g * (band + 1e-9);
      if (disc > 0.0) {
        const double re_entry = (u + std::sqrt(disc)) / g;
        if (re_entry > tau + step_tau) {
          tau = std::floor(re_entry / step_tau) * step_tau;
          tau_prev = tau - step_tau;
          h_prev = height(tau_prev);
          continue;
        }
      }
    }
    const double h = height(tau);
    if (h_prev > 0.0 && h <= 0.0) {
      root_lo = tau_prev;
      root_hi = tau;
      break;
    }
    if (tau_prev > 0.0 && h_prev <= 0.0 && h > 0.0) {
      // ball re-emerges without registered hit; treat the earlier crossing
      root_lo = tau_prev;
      root_hi = tau;
      break;
    }
    tau_prev = tau;
    h_prev = h;
    tau += step_tau;
  }
  if (root_lo < 0.0)
    throw Error(ErrorKind::NoImpact, "impact_map", "free_flight_oracle",
                "no crossing within horizon " + std::to_string(horizon));
  const double tau_hit = bisect(height, root_lo, root_hi, 1e-12);
  const double t1 = t0 + tau_hit;
  const double xdot = u - g * tau_hit;  // absolute velocity at impact
  const double rel = xdot - spec.eval(t1).fdot;
  if (std::abs(rel) < 1e-6)
    throw Error(ErrorKind::GrazingImpact, "impact_map", "free_flight_oracle",
                "tangential hit, result unreliable");
  return {t1, -rel};
}

}  // namespace bounce
