#pragma once

// Explicit sequences of the construction: the periodic / accelerating /
// decelerating orbits, splicing of sub- and super-solutions, translate
// envelopes and their symbolic versions, and the brute-force (m, Q) solver.
//
// The super-solution runs (m+1)n for n <= 0, the accelerating times
// t* + n^2 + (m-1)n up to n_plus, then an integer translate of the (m+2)
// periodic orbit. The sub-solution runs (m+2)n for n <= 0, the decelerating
// times t# - n^2 + (m+4)n up to n_minus, then an integer translate of the
// (m+1) orbit. Splice indices and translates are found constructively and
// validated by the ordering conditions of the gluing lemma.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/extension.hpp"
#include "bounce/forcing.hpp"

namespace bounce {

enum class SeqKind { sub, super, envelope_lower, envelope_upper, symbolic_lower, symbolic_upper };

inline const char* to_string(SeqKind k) {
  switch (k) {
    case SeqKind::sub: return "sub";
    case SeqKind::super: return "super";
    case SeqKind::envelope_lower: return "envelope_lower";
    case SeqKind::envelope_upper: return "envelope_upper";
    case SeqKind::symbolic_lower: return "symbolic_lower";
    case SeqKind::symbolic_upper: return "symbolic_upper";
  }
  return "?";
}

struct SymbolSequence {
  std::vector<int> word;  // entries in {0,1}
  bool periodic = true;

  int at_block(std::int64_t n) const {
    const auto p = static_cast<std::int64_t>(word.size());
    std::int64_t i = n % p;
    if (i < 0) i += p;
    return word[static_cast<std::size_t>(i)];
  }
  bool operator==(const SymbolSequence& o) const {
    return word == o.word && periodic == o.periodic;
  }
};

struct ScaffoldSeq {
  SeqKind kind = SeqKind::sub;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = -1;
  std::vector<double> values;
  std::vector<std::int64_t> glue_indices;
  std::optional<SymbolSequence> code;

  double at(std::int64_t n) const { return values[static_cast<std::size_t>(n - n_lo)]; }
  bool covers(std::int64_t n) const { return n >= n_lo && n <= n_hi; }
  std::int64_t size() const { return n_hi - n_lo + 1; }
};

enum class OrbitKind { periodic, accelerating, decelerating };

// z/Z: the extremal linear growth profiles with slopes m+1 and m+2.
inline double z_profile(std::int64_t m, double kappa) {
  return std::min(static_cast<double>(m + 1) * kappa, static_cast<double>(m + 2) * kappa);
}
inline double Z_profile(std::int64_t m, double kappa) {
  return std::max(static_cast<double>(m + 1) * kappa, static_cast<double>(m + 2) * kappa);
}

// zeta_e at an integer argument: the blockwise integral of m+1+e over [0, kappa].
inline double zeta_e(const SymbolSequence& code, std::int64_t kappa, std::int64_t m, int Q) {
  std::int64_t total = 0;
  if (kappa >= 0) {
    const std::int64_t full = kappa / Q;
    for (std::int64_t j = 0; j < full; ++j) total += Q * (m + 1 + code.at_block(j));
    total += (kappa - full * Q) * (m + 1 + code.at_block(full));
  } else {
    std::int64_t k = 0, j = -1;
    while (k > kappa) {
      const std::int64_t lo = std::max(kappa, k - Q);
      total -= (k - lo) * (m + 1 + code.at_block(j));
      k = lo;
      --j;
    }
  }
  return static_cast<double>(total);
}

// Closed-form special orbit times over [n_lo, n_hi]; every interior index is
// checked to be stationary for the extended recurrence within 1e-9.
inline ScaffoldSeq special_orbit_times(OrbitKind kind, std::int64_t param,
                                       const ExtensionField& field, const Anchors& anchors,
                                       std::int64_t n_lo, std::int64_t n_hi) {
  const ConstantsBundle& c = field.consts();
  const double floor_m = std::max(2.0 * c.v_bar / c.g, 2.0 * c.K + 9.0);
  if (!(static_cast<double>(param) > floor_m))
    throw Error(ErrorKind::ParamTooSmall, "scaffold", "special_orbit_times",
                "param " + std::to_string(param) + " not above max(2 v_bar/g, 2K+9) = " +
                    std::to_string(floor_m));
  if (kind == OrbitKind::decelerating) {
    const auto N = static_cast<std::int64_t>(
        std::floor((static_cast<double>(param) - c.K) / 2.0));
    n_lo = std::max<std::int64_t>(n_lo, 0);
    n_hi = std::min<std::int64_t>(n_hi, N - 1);
  }
  if (n_hi < n_lo)
    throw Error(ErrorKind::ParamTooSmall, "scaffold", "special_orbit_times", "empty window");

  ScaffoldSeq seq;
  seq.kind = SeqKind::sub;  // exact orbits satisfy both sign conditions
  seq.n_lo = n_lo;
  seq.n_hi = n_hi;
  seq.values.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const auto nd = static_cast<double>(n);
    double t;
    switch (kind) {
      case OrbitKind::periodic: t = static_cast<double>(param) * nd; break;
      case OrbitKind::accelerating:
        t = anchors.t_star + nd * nd + static_cast<double>(param - 1) * nd;
        break;
      case OrbitKind::decelerating:
        t = anchors.t_sharp - nd * nd + static_cast<double>(param + 1) * nd;
        break;
      default: t = 0.0;
    }
    seq.values.push_back(t);
  }
  for (std::int64_t n = n_lo + 1; n < n_hi; ++n) {
    const double r = field.delta_tilde(seq.at(n - 1), seq.at(n), seq.at(n + 1));
    if (std::abs(r) > 1e-9)
      throw Error(ErrorKind::ConvergenceError, "scaffold", "special_orbit_times",
                  "orbit not stationary at n=" + std::to_string(n) +
                      " residual=" + std::to_string(r));
  }
  return seq;
}

// Splice `first` (up to n_tilde) with `second` (after n_tilde). The ordering
// condition of the gluing lemma is checked exactly, and the sign condition at
// the two indices next to the seam is re-checked numerically.
inline ScaffoldSeq glue(const ExtensionField& field, const ScaffoldSeq& first,
                        const ScaffoldSeq& second, std::int64_t n_tilde) {
  if (first.kind != second.kind || (first.kind != SeqKind::sub && first.kind != SeqKind::super))
    throw Error(ErrorKind::GlueOrderViolated, "scaffold", "glue", "kinds must match (sub/super)");
  if (!first.covers(n_tilde) || !first.covers(n_tilde + 1) || !second.covers(n_tilde) ||
      !second.covers(n_tilde + 1))
    throw Error(ErrorKind::GlueOrderViolated, "scaffold", "glue",
                "windows must overlap across the splice");
  const double s0 = first.at(n_tilde), s1 = first.at(n_tilde + 1);
  const double t0 = second.at(n_tilde), t1 = second.at(n_tilde + 1);
  const bool ok = first.kind == SeqKind::super ? (s0 <= t0 && t0 <= t1 && t1 <= s1)
                                               : (t0 <= s0 && s0 <= s1 && s1 <= t1);
  if (!ok)
    throw Error(ErrorKind::GlueOrderViolated, "scaffold", "glue",
                "ordering failed at n=" + std::to_string(n_tilde) + ": first=(" +
                    std::to_string(s0) + "," + std::to_string(s1) + ") second=(" +
                    std::to_string(t0) + "," + std::to_string(t1) + ")");

  ScaffoldSeq out;
  out.kind = first.kind;
  out.n_lo = first.n_lo;
  out.n_hi = second.n_hi;
  out.values.reserve(static_cast<std::size_t>(out.size()));
  for (std::int64_t n = out.n_lo; n <= out.n_hi; ++n)
    out.values.push_back(n <= n_tilde ? first.at(n) : second.at(n));
  out.glue_indices = first.glue_indices;
  out.glue_indices.push_back(n_tilde);

  const double tol = 1e-8;
  for (std::int64_t n : {n_tilde, n_tilde + 1}) {
    if (n <= out.n_lo || n >= out.n_hi) continue;
    const double r = field.delta_tilde(out.at(n - 1), out.at(n), out.at(n + 1));
    const bool sign_ok = out.kind == SeqKind::super ? r <= tol : r >= -tol;
    if (!sign_ok)
      throw Error(ErrorKind::GlueOrderViolated, "scaffold", "glue",
                  "sign condition failed at splice index " + std::to_string(n));
  }
  return out;
}

namespace detail {

inline ScaffoldSeq linear_seq(SeqKind kind, std::int64_t slope, std::int64_t offset,
                              std::int64_t n_lo, std::int64_t n_hi) {
  ScaffoldSeq s;
  s.kind = kind;
  s.n_lo = n_lo;
  s.n_hi = n_hi;
  for (std::int64_t n = n_lo; n <= n_hi; ++n)
    s.values.push_back(static_cast<double>(slope * n + offset));
  return s;
}

// Smallest integer p with lo <= p <= hi, if any.
inline std::optional<std::int64_t> integer_in(double lo, double hi) {
  const double p = std::ceil(lo - 1e-12);
  if (p <= hi + 1e-12) return static_cast<std::int64_t>(p);
  return std::nullopt;
}

}  // namespace detail

// Full glued sub- or super-solution on [-window, window].
inline ScaffoldSeq build_scaffold(SeqKind kind, const ExtensionField& field,
                                  const Anchors& anchors, std::int64_t window) {
  if (kind != SeqKind::sub && kind != SeqKind::super)
    throw Error(ErrorKind::GlueOrderViolated, "scaffold", "build_scaffold",
                "kind must be sub or super");
  const ConstantsBundle& c = field.consts();
  const std::int64_t m = c.m;

  ScaffoldSeq result;
  if (kind == SeqKind::super) {
    // n_tilde = first n with 2n > m + 4, then try n_plus in {n_tilde, n_tilde+1}
    const std::int64_t n_tilde = (m + 4) / 2 + 1;
    const auto t_star_at = [&](std::int64_t n) {
      const auto nd = static_cast<double>(n);
      return anchors.t_star + nd * nd + static_cast<double>(m - 1) * nd;
    };
    std::optional<std::int64_t> n_plus, p_plus;
    for (std::int64_t cand : {n_tilde, n_tilde + 1}) {
      // ordering: t*_c <= (m+2)c + p and (m+2)(c+1) + p <= t*_{c+1}
      const double lo = t_star_at(cand) - static_cast<double>((m + 2) * cand);
      const double hi = t_star_at(cand + 1) - static_cast<double>((m + 2) * (cand + 1));
      if (auto p = detail::integer_in(lo, hi)) {
        n_plus = cand;
        p_plus = *p;
        break;
      }
    }
    if (!n_plus)
      throw Error(ErrorKind::NoGlueIndex, "scaffold", "build_scaffold",
                  "no valid n_plus near " + std::to_string(n_tilde));
    if (window <= *n_plus + 2)
      throw Error(ErrorKind::TruncationUnsafe, "scaffold", "build_scaffold",
                  "window must exceed n_plus + 2 = " + std::to_string(*n_plus + 2));
    auto head = detail::linear_seq(SeqKind::super, m + 1, 0, -window, window);
    auto mid = special_orbit_times(OrbitKind::accelerating, m, field, anchors, -1, *n_plus + 1);
    mid.kind = SeqKind::super;
    auto tail = detail::linear_seq(SeqKind::super, m + 2, *p_plus, *n_plus - 1, window);
    result = glue(field, glue(field, head, mid, 0), tail, *n_plus);
  } else {
    const std::int64_t r = m + 3;
    // n_tilde = first n with r - 2n < (m+1)/2
    std::int64_t n_tilde = 1;
    while (!(static_cast<double>(r - 2 * n_tilde) < 0.5 * static_cast<double>(m + 1))) ++n_tilde;
    const auto t_sharp_at = [&](std::int64_t n) {
      const auto nd = static_cast<double>(n);
      return anchors.t_sharp - nd * nd + static_cast<double>(r + 1) * nd;
    };
    std::optional<std::int64_t> n_minus, p_minus;
    for (std::int64_t cand : {n_tilde, n_tilde + 1}) {
      if (!(static_cast<double>(cand) < 0.5 * (static_cast<double>(m + 1) - c.K))) continue;
      // ordering: (m+1)c + p <= t#_c and t#_{c+1} <= (m+1)(c+1) + p
      const double lo = t_sharp_at(cand + 1) - static_cast<double>((m + 1) * (cand + 1));
      const double hi = t_sharp_at(cand) - static_cast<double>((m + 1) * cand);
      if (auto p = detail::integer_in(lo, hi)) {
        n_minus = cand;
        p_minus = *p;
        break;
      }
    }
    if (!n_minus)
      throw Error(ErrorKind::NoGlueIndex, "scaffold", "build_scaffold",
                  "no valid n_minus near " + std::to_string(n_tilde));
    if (window <= *n_minus + 2)
      throw Error(ErrorKind::TruncationUnsafe, "scaffold", "build_scaffold",
                  "window must exceed n_minus + 2 = " + std::to_string(*n_minus + 2));
    auto head = detail::linear_seq(SeqKind::sub, m + 2, 0, -window, window);
    auto mid = special_orbit_times(OrbitKind::decelerating, r, field, anchors, -1, *n_minus + 1);
    mid.kind = SeqKind::sub;
    auto tail = detail::linear_seq(SeqKind::sub, m + 1, *p_minus, *n_minus - 1, window);
    result = glue(field, glue(field, head, mid, 0), tail, *n_minus);
  }

  // full sign sweep over the interior
  const double tol = 1e-8;
  for (std::int64_t n = result.n_lo + 1; n < result.n_hi; ++n) {
    const double r = field.delta_tilde(result.at(n - 1), result.at(n), result.at(n + 1));
    const bool ok = kind == SeqKind::super ? r <= tol : r >= -tol;
    if (!ok)
      throw Error(ErrorKind::NoGlueIndex, "scaffold", "build_scaffold",
                  "sign condition failed at n=" + std::to_string(n) +
                      " residual=" + std::to_string(r));
  }
  return result;
}

struct EnvelopePair {
  ScaffoldSeq lower;   // sup of admissible translates of the sub-solution
  ScaffoldSeq upper;   // inf of admissible translates of the super-solution
  double M_eff;        // max(analytic M, observed envelope deviations)
};

// w_lower[n] = max_q { sub[n-q] + z(q) }, w_upper[n] = min_q { super[n-q] + Z(q) },
// q restricted so n-q stays in the scaffold window; the extremum must be
// attained strictly inside that range.
inline EnvelopePair envelopes(const ScaffoldSeq& sub_seq, const ScaffoldSeq& super_seq,
                              const Anchors& anchors, const ConstantsBundle& consts,
                              std::int64_t window) {
  if (sub_seq.kind != SeqKind::sub || super_seq.kind != SeqKind::super)
    throw Error(ErrorKind::GlueOrderViolated, "scaffold", "envelopes", "kind mismatch");
  if (window > std::min(-sub_seq.n_lo, sub_seq.n_hi) / 2)
    throw Error(ErrorKind::TruncationUnsafe, "scaffold", "envelopes",
                "scaffold window too small for requested envelope window");
  const std::int64_t m = consts.m;

  EnvelopePair out;
  out.lower.kind = SeqKind::envelope_lower;
  out.upper.kind = SeqKind::envelope_upper;
  out.lower.n_lo = out.upper.n_lo = -window;
  out.lower.n_hi = out.upper.n_hi = window;
  double dev_lower = 0.0, dev_upper = 0.0;
  for (std::int64_t n = -window; n <= window; ++n) {
    const std::int64_t q_lo = n - sub_seq.n_hi, q_hi = n - sub_seq.n_lo;
    double best = -1e300, worst = 1e300;
    std::int64_t arg_best = q_lo, arg_worst = q_lo;
    for (std::int64_t q = q_lo; q <= q_hi; ++q) {
      const double lo_v = sub_seq.at(n - q) + z_profile(m, static_cast<double>(q));
      if (lo_v > best) {
        best = lo_v;
        arg_best = q;
      }
      const double up_v = super_seq.at(n - q) + Z_profile(m, static_cast<double>(q));
      if (up_v < worst) {
        worst = up_v;
        arg_worst = q;
      }
    }
    if (arg_best <= q_lo || arg_best >= q_hi || arg_worst <= q_lo || arg_worst >= q_hi)
      throw Error(ErrorKind::TruncationUnsafe, "scaffold", "envelopes",
                  "extremum attained at translate search boundary, n=" + std::to_string(n));
    out.lower.values.push_back(best);
    out.upper.values.push_back(worst);
    dev_lower = std::max(dev_lower, std::abs(best - z_profile(m, static_cast<double>(n))));
    dev_upper = std::max(dev_upper, std::abs(worst - Z_profile(m, static_cast<double>(n))));
  }
  const double M_analytic = std::max(2.25 - anchors.t_star, 2.25 + anchors.t_sharp);
  out.M_eff = std::max({M_analytic, dev_lower, dev_upper});
  return out;
}

// Brute-force (m, Q): m = Q^2 with the smallest Q satisfying the inequality
// system and m > 2K + 9.
inline std::pair<std::int64_t, int> solve_constants(double K, double C, double M) {
  for (int Q = 2;; ++Q) {
    const std::int64_t m = static_cast<std::int64_t>(Q) * Q;
    if (ConstantsBundle::system_holds(K, C, M, m, Q) && static_cast<double>(m) > 2.0 * K + 9.0)
      return {m, Q};
  }
}

// x_lower[n] = max_j { w_lower[n-jQ] + zeta_e(jQ) } and the matching inf for
// the upper envelope; both carry the code and stay within M_eff of zeta_e.
inline std::pair<ScaffoldSeq, ScaffoldSeq> symbolic_envelopes(const SymbolSequence& code,
                                                              const EnvelopePair& envs,
                                                              const ConstantsBundle& consts,
                                                              std::int64_t window) {
  if (code.word.empty())
    throw Error(ErrorKind::ConfigError, "scaffold", "symbolic_envelopes", "empty code");
  const int Q = consts.Q;
  const std::int64_t m = consts.m;
  const std::int64_t need =
      (static_cast<std::int64_t>(code.word.size()) + 2) * static_cast<std::int64_t>(Q);
  if (envs.lower.n_hi < std::max(window, need))
    throw Error(ErrorKind::TruncationUnsafe, "scaffold", "symbolic_envelopes",
                "envelope window too small");

  ScaffoldSeq xl, xu;
  xl.kind = SeqKind::symbolic_lower;
  xu.kind = SeqKind::symbolic_upper;
  xl.code = xu.code = code;
  xl.n_lo = xu.n_lo = -window;
  xl.n_hi = xu.n_hi = window;
  for (std::int64_t n = -window; n <= window; ++n) {
    // j with n - jQ inside the w window
    const std::int64_t j_lo = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(n - envs.lower.n_hi) / Q));
    const std::int64_t j_hi = static_cast<std::int64_t>(
        std::floor(static_cast<double>(n - envs.lower.n_lo) / Q));
    double best = -1e300, worst = 1e300;
    std::int64_t arg_best = j_lo, arg_worst = j_lo;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const double shift = zeta_e(code, j * Q, m, Q);
      const double lo_v = envs.lower.at(n - j * Q) + shift;
      const double up_v = envs.upper.at(n - j * Q) + shift;
      if (lo_v > best) {
        best = lo_v;
        arg_best = j;
      }
      if (up_v < worst) {
        worst = up_v;
        arg_worst = j;
      }
    }
    if (arg_best <= j_lo || arg_best >= j_hi || arg_worst <= j_lo || arg_worst >= j_hi)
      throw Error(ErrorKind::TruncationUnsafe, "scaffold", "symbolic_envelopes",
                  "extremum attained at translate search boundary, n=" + std::to_string(n));
    xl.values.push_back(best);
    xu.values.push_back(worst);
  }
  return {std::move(xl), std::move(xu)};
}

}  // namespace bounce
