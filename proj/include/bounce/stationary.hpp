#pragma once

// Stationary configurations between symbolic envelopes. The solver runs the
// comparison flow dt_n/ds = Delta~(t_{n-1}, t_n, t_{n+1}) on one period block
// of pQ unknowns with the integral closure t_{n+pQ} = t_n + zeta_e(pQ).
// Starting from an integer down-shift of the lower envelope (still a
// sub-solution) the flow increases monotonically and is trapped below the
// integer up-shift of the upper envelope, so it converges to the least
// stationary configuration above the start.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/extension.hpp"
#include "bounce/generating.hpp"
#include "bounce/impact_map.hpp"
#include "bounce/scaffold.hpp"

namespace bounce {

struct Configuration {
  struct Closure {
    std::int64_t period;  // pQ
    double shift;         // zeta_e(pQ), an integer by construction
  };

  std::int64_t n0 = 0;
  std::vector<double> values;
  std::optional<Closure> closure;
  double residual = 0.0;
  std::optional<SymbolSequence> code;

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

  // neighbors across the seam come from the closure
  double at(std::int64_t n) const {
    std::int64_t i = n - n0;
    double off = 0.0;
    if (closure) {
      while (i < 0) {
        i += closure->period;
        off -= closure->shift;
      }
      while (i >= size()) {
        i -= closure->period;
        off += closure->shift;
      }
    }
    return values[static_cast<std::size_t>(i)] + off;
  }
  bool interior(std::int64_t n) const {
    return closure || (n > n0 && n < n0 + size() - 1);
  }
};

namespace detail {

inline std::vector<double> flow_residuals(const Configuration& cfg, const ExtensionField& field) {
  std::vector<double> r(static_cast<std::size_t>(cfg.size()), 0.0);
  for (std::int64_t n = cfg.n0; n < cfg.n0 + cfg.size(); ++n) {
    if (!cfg.interior(n)) continue;
    r[static_cast<std::size_t>(n - cfg.n0)] =
        field.delta_tilde(cfg.at(n - 1), cfg.at(n), cfg.at(n + 1));
  }
  return r;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// sup over the window of |dDelta~/db| by central differences
inline double local_lipschitz(const Configuration& cfg, const ExtensionField& field) {
  const double h = 1e-6;
  double m = 0.0;
  for (std::int64_t n = cfg.n0; n < cfg.n0 + cfg.size(); ++n) {
    if (!cfg.interior(n)) continue;
    const double a = cfg.at(n - 1), b = cfg.at(n), c = cfg.at(n + 1);
    m = std::max(m, std::abs(field.delta_tilde(a, b + h, c) - field.delta_tilde(a, b - h, c)) /
                        (2.0 * h));
  }
  return m;
}

}  // namespace detail

// One explicit Euler step of the comparison flow (interior indices only for
// open windows). Exposed for the order-preservation property checks.
inline void flow_step(Configuration& cfg, const ExtensionField& field, double eta) {
  const auto r = detail::flow_residuals(cfg, field);
  for (std::size_t i = 0; i < r.size(); ++i) cfg.values[i] += eta * r[i];
}

struct FindOptions {
  double tol = 1e-8;
  std::int64_t max_steps = 1000000;
};

// Stationary configuration for a periodic code, sandwiched between the
// symbolic envelopes. M_eff bounds the sandwich band used for the safety
// projection; the flow itself normally never touches it.
inline Configuration find_between(const ScaffoldSeq& x_lower, const ScaffoldSeq& x_upper,
                                  const SymbolSequence& code, const ConstantsBundle& consts,
                                  const ExtensionField& field, double M_eff,
                                  const FindOptions& opt = {}) {
  const auto p = static_cast<std::int64_t>(code.word.size());
  if (p == 0)
    throw Error(ErrorKind::ConfigError, "stationary", "find_between", "empty code");
  const std::int64_t block = p * consts.Q;
  if (!x_lower.covers(0) || !x_lower.covers(block) || !x_upper.covers(block))
    throw Error(ErrorKind::TruncationUnsafe, "stationary", "find_between",
                "envelopes must cover [0, pQ]");

  // smallest integer shift that orders the band: x_lower - s <= x_upper + s
  double depth = 0.0;
  for (std::int64_t n = 0; n < block; ++n)
    depth = std::max(depth, x_lower.at(n) - x_upper.at(n));
  const double shift = std::ceil(std::max(0.0, 0.5 * depth) - 1e-12);

  Configuration cfg;
  cfg.n0 = 0;
  cfg.code = code;
  cfg.closure = Configuration::Closure{block, zeta_e(code, block, consts.m, consts.Q)};
  cfg.values.reserve(static_cast<std::size_t>(block));
  for (std::int64_t n = 0; n < block; ++n) cfg.values.push_back(x_lower.at(n) - shift);

  auto res = detail::flow_residuals(cfg, field);
  double sup = detail::max_abs(res);
  double eta = 0.4 / std::max(detail::local_lipschitz(cfg, field), 1e-12);
  std::int64_t projections = 0, steps = 0;
  while (sup > opt.tol) {
    if (steps >= opt.max_steps)
      throw Error(ErrorKind::NoConvergence, "stationary", "find_between",
                  "flow still at residual " + std::to_string(sup) + " after " +
                      std::to_string(steps) + " steps");
    bool projected = false;
    for (std::int64_t n = 0; n < block; ++n) {
      auto& t = cfg.values[static_cast<std::size_t>(n)];
      t += eta * res[static_cast<std::size_t>(n)];
      const double lo = x_lower.at(n) - M_eff, hi = x_upper.at(n) + M_eff;
      if (t < lo) {
        t = lo;
        projected = true;
      } else if (t > hi) {
        t = hi;
        projected = true;
      }
    }
    ++steps;
    if (projected) ++projections;
    if (projections * 10 > steps && steps > 100)
      throw Error(ErrorKind::SandwichBreach, "stationary", "find_between",
                  "projection active on more than 10% of steps");
    if (steps % 1000 == 0) eta = 0.4 / std::max(detail::local_lipschitz(cfg, field), 1e-12);
    res = detail::flow_residuals(cfg, field);
    sup = detail::max_abs(res);
  }
  cfg.residual = sup;
  return cfg;
}

struct CertifyReport {
  bool gaps_ok = false;        // every gap above K, so the configuration is h-stationary
  std::optional<bool> sandwich_ok;  // within the symbolic envelope band, when available
  bool growth_ok = false;      // the block displacement bound for all 0 <= j < Q
  double min_gap = 0.0;
  std::int64_t worst_gap_index = 0;

  bool pass() const { return gaps_ok && growth_ok && sandwich_ok.value_or(true); }
};

inline CertifyReport certify(const Configuration& cfg, const ConstantsBundle& consts,
                             const ScaffoldSeq* x_lower = nullptr,
                             const ScaffoldSeq* x_upper = nullptr, double M_eff = 0.0) {
  CertifyReport rep;
  const std::int64_t last = cfg.closure ? cfg.n0 + cfg.size() : cfg.n0 + cfg.size() - 1;
  rep.min_gap = 1e300;
  for (std::int64_t n = cfg.n0; n < last; ++n) {
    const double gap = cfg.at(n + 1) - cfg.at(n);
    if (gap < rep.min_gap) {
      rep.min_gap = gap;
      rep.worst_gap_index = n;
    }
  }
  rep.gaps_ok = rep.min_gap > consts.K;

  if (x_lower && x_upper) {
    bool ok = true;
    for (std::int64_t n = cfg.n0; n < cfg.n0 + cfg.size(); ++n) {
      if (!x_lower->covers(n) || !x_upper->covers(n)) continue;
      if (!(cfg.at(n) >= x_lower->at(n) - M_eff && cfg.at(n) <= x_upper->at(n) + M_eff)) {
        ok = false;
        break;
      }
    }
    rep.sandwich_ok = ok;
  }

  // |t_{b+Q} - t_b| <= |t_{b+j+1} - t_{b+j}| Q + Q(Q-1)C/2 for all j < Q
  const int Q = consts.Q;
  const double slack = static_cast<double>(Q) * (Q - 1.0) * 0.5 * consts.C;
  bool growth = true;
  const std::int64_t b_hi = cfg.closure ? cfg.n0 + cfg.size() - 1 : cfg.n0 + cfg.size() - 1 - Q;
  for (std::int64_t b = cfg.n0; b <= b_hi && growth; ++b) {
    if (!cfg.closure && b + Q >= cfg.n0 + cfg.size()) break;
    const double disp = std::abs(cfg.at(b + Q) - cfg.at(b));
    for (int j = 0; j < Q; ++j) {
      const double gap = std::abs(cfg.at(b + j + 1) - cfg.at(b + j));
      if (!(disp <= gap * Q + slack + 1e-9)) {
        growth = false;
        break;
      }
    }
  }
  rep.growth_ok = growth;
  return rep;
}

// Certified configurations carry genuine impact states: v_n is the launch
// velocity of the arc to t_{n+1}, and stepping must reproduce the next state.
inline std::vector<ImpactState> lift_to_orbit(const Configuration& cfg, const ForcingSpec& spec,
                                              const ConstantsBundle& consts) {
  const std::int64_t count = cfg.closure ? cfg.size() : cfg.size() - 1;
  std::vector<ImpactState> states;
  states.reserve(static_cast<std::size_t>(count));
  for (std::int64_t n = cfg.n0; n < cfg.n0 + count; ++n) {
    const auto bd = boundary_data(cfg.at(n), cfg.at(n + 1), spec, consts);
    states.push_back({cfg.at(n), bd.v0});
  }
  double worst = 0.0;
  std::int64_t worst_idx = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    ImpactState expected;
    if (i + 1 < count) expected = states[static_cast<std::size_t>(i + 1)];
    else if (cfg.closure) expected = {states.front().t + cfg.closure->shift, states.front().v};
    else break;
    const auto next = step(states[static_cast<std::size_t>(i)], spec, consts);
    const double err =
        std::max(std::abs(next.t - expected.t), std::abs(next.v - expected.v));
    if (err > worst) {
      worst = err;
      worst_idx = i;
    }
  }
  if (worst > 1e-8)
    throw Error(ErrorKind::OrbitMismatch, "stationary", "lift_to_orbit",
                "step mismatch " + std::to_string(worst) + " at index " +
                    std::to_string(worst_idx));
  return states;
}

}  // namespace bounce
