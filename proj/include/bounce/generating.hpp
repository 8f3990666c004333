#pragma once

// Generating-function quantities of the unmodified map. h itself is never
// materialized: the arc from impact t0 to impact t1 has launch/arrival
// relative velocities
//   v0 = (g/2)(t1-t0) + f[t1,t0] - f'(t0)
//   v1 = (g/2)(t1-t0) - f[t1,t0] + f'(t1)
// and d1h = E0 = v0^2/2, d2h = -E1 = -v1^2/2. The recurrence is
//   Delta(a,b,c) = d2h(a,b) + d1h(b,c) = (v0(b,c)^2 - v1(a,b)^2) / 2.

#include <cmath>
#include <string>
#include <vector>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/forcing.hpp"

namespace bounce {

struct BoundaryData {
  double v0;
  double v1;
  double E0;
  double E1;
};

namespace detail {

// No domain check; callers guarantee t1 > t0.
inline BoundaryData boundary_data_raw(const ForcingSpec& spec, double t0, double t1) {
  const double g = spec.g();
  const double gap = t1 - t0;
  const double dd = divided_difference(spec, t0, t1);
  const double v0 = 0.5 * g * gap + dd - spec.eval(t0).fdot;
  const double v1 = 0.5 * g * gap - dd + spec.eval(t1).fdot;
  return {v0, v1, 0.5 * v0 * v0, 0.5 * v1 * v1};
}

}  // namespace detail

inline BoundaryData boundary_data(double t0, double t1, const ForcingSpec& spec,
                                  const ConstantsBundle& consts) {
  if (!(t1 - t0 > consts.K1))
    throw Error(ErrorKind::DomainError, "generating", "boundary_data",
                "gap " + std::to_string(t1 - t0) + " not above K1");
  return detail::boundary_data_raw(spec, t0, t1);
}

inline double delta_rec(double a, double b, double c, const ForcingSpec& spec,
                        const ConstantsBundle& consts) {
  if (!(b - a > consts.K1 && c - b > consts.K1))
    throw Error(ErrorKind::DomainError, "generating", "delta_rec", "gap not above K1");
  const auto in = detail::boundary_data_raw(spec, a, b);
  const auto out = detail::boundary_data_raw(spec, b, c);
  return 0.5 * (out.v0 * out.v0 - in.v1 * in.v1);
}

// d12h = dE0/dt1 in closed form; defined for any positive gap.
inline double twist_partial(const ForcingSpec& spec, double t0, double t1) {
  const double g = spec.g();
  const double gap = t1 - t0;
  const double dd = divided_difference(spec, t0, t1);
  const double v0 = 0.5 * g * gap + dd - spec.eval(t0).fdot;
  return v0 * (0.5 * g + (spec.eval(t1).fdot - dd) / gap);
}

struct DomainEstimate {
  double K1;
  double v_bar;
  double mono_floor;  // smallest gap with a monotone implicit-equation residual
};

// The implicit equation for t1 has derivative
//   s(t0, gap) = 1 + (2/g)(f'(t1) - f[t1,t0]) / gap.
// K1 is twice the smallest gap beyond which s stays positive for every t0
// (safety factor 2), and v_bar is sized so that v0 > v_bar forces gaps > K1.
inline DomainEstimate estimate_domain(const ForcingSpec& spec) {
  const double g = spec.g();
  const double mf = spec.max_abs_f();
  const double mfd = spec.max_abs_fdot();
  // beyond gap_tail the correction is below 1/2 by the crude bound
  double gap_tail = 1.0;
  while ((2.0 / g) * (mfd + 2.0 * mf / gap_tail) / gap_tail > 0.5 && gap_tail < 1e6)
    gap_tail *= 1.25;

  const double dgap = 0.05;
  const int nt0 = 100;
  std::vector<double> mins;
  for (double gap = dgap; gap <= gap_tail + dgap; gap += dgap) {
    double mn = 1e300;
    for (int i = 0; i < nt0; ++i) {
      const double t0 = static_cast<double>(i) / nt0;
      const double t1 = t0 + gap;
      const double dd = divided_difference(spec, t0, t1);
      const double s = 1.0 + (2.0 / g) * (spec.eval(t1).fdot - dd) / gap;
      mn = std::min(mn, s);
    }
    mins.push_back(mn);
  }
  double floor_gap = gap_tail;
  double suffix = 1e300;
  for (std::size_t i = mins.size(); i-- > 0;) {
    suffix = std::min(suffix, mins[i]);
    if (suffix > 0.0) floor_gap = dgap * static_cast<double>(i + 1);
    else break;
  }
  DomainEstimate out{};
  out.mono_floor = floor_gap;
  out.K1 = 2.0 * floor_gap;
  out.v_bar = 0.5 * g * out.K1 + 2.0 * mfd + 2.0 * mf * (2.0 / out.K1);
  return out;
}

struct TwistEstimate {
  double K;
  double delta;
  double grid_min;  // observed minimum of the finite-difference d12h
};

// Searches for K >= K1 + 2 eps with d12h bounded below by a positive constant
// on the grid t0 in [0,1) step 1e-2, gap in [K-eps, K+50] step 0.1; delta is
// half the observed minimum. K doubles on failure, up to 10 times.
inline TwistEstimate estimate_twist(const ForcingSpec& spec, double K1, double eps) {
  double K = K1 + 2.0 * eps;
  for (int attempt = 0; attempt < 10; ++attempt) {
    double mn = 1e300;
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      const double t0 = static_cast<double>(i) / 100.0;
      for (double gap = K - eps; gap <= K + 50.0; gap += 0.1) {
        const double t1 = t0 + gap;
        const double ep = detail::boundary_data_raw(spec, t0, t1 + h).E0;
        const double em = detail::boundary_data_raw(spec, t0, t1 - h).E0;
        mn = std::min(mn, (ep - em) / (2.0 * h));
      }
    }
    if (mn > 0.0) return {K, 0.5 * mn, mn};
    K *= 2.0;
  }
  throw Error(ErrorKind::TwistFailure, "generating", "estimate_twist",
              "no positive twist bound found after 10 doublings");
}

}  // namespace bounce
