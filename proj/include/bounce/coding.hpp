#pragma once

// Symbolic dynamics over certified configurations: block displacements encode
// the binary word, the shift equivariance of the Q-th map iterate is verified
// by two independent routes, and configurations sample the invariant set as
// (t mod 1, E) pairs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/generating.hpp"
#include "bounce/impact_map.hpp"
#include "bounce/scaffold.hpp"
#include "bounce/stationary.hpp"

namespace bounce {

struct ChaosReport {
  SymbolSequence code_in;
  SymbolSequence code_out;
  double residual = 0.0;
  double separation_margin = std::numeric_limits<double>::infinity();
  bool shift_verified = false;
  std::vector<std::pair<double, double>> K_points;  // (t mod 1, E)
};

// Displacement over block k, i.e. t_{(k+1)Q} - t_{kQ} starting at `base`.
inline std::vector<double> block_displacements(const Configuration& cfg,
                                               const ConstantsBundle& consts,
                                               std::int64_t base = 0) {
  if (!cfg.closure)
    throw Error(ErrorKind::Unclassifiable, "coding", "block_displacements",
                "open configurations have no block structure");
  const auto p = cfg.closure->period / consts.Q;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p));
  for (std::int64_t k = 0; k < p; ++k)
    out.push_back(cfg.at(base + (k + 1) * consts.Q) - cfg.at(base + k * consts.Q));
  return out;
}

namespace detail {

inline int classify_displacement(double disp, const ConstantsBundle& consts, double M_eff) {
  const double band = 4.0 * M_eff;
  const double c0 = static_cast<double>((consts.m + 1) * consts.Q);
  const double c1 = static_cast<double>((consts.m + 2) * consts.Q);
  const bool in0 = std::abs(disp - c0) <= band;
  const bool in1 = std::abs(disp - c1) <= band;
  if (in0 == in1)
    throw Error(ErrorKind::Unclassifiable, "coding", "encode",
                "displacement " + std::to_string(disp) + " fits " +
                    (in0 ? "both bands" : "neither band"));
  return in1 ? 1 : 0;
}

}  // namespace detail

// One symbol per block; the two bands around (m+1)Q and (m+2)Q are disjoint
// because Q > 8 M_eff.
inline SymbolSequence encode(const Configuration& cfg, const ConstantsBundle& consts,
                             double M_eff, std::int64_t base = 0) {
  SymbolSequence out;
  out.periodic = true;
  for (double d : block_displacements(cfg, consts, base))
    out.word.push_back(detail::classify_displacement(d, consts, M_eff));
  return out;
}

inline SymbolSequence left_shift(const SymbolSequence& code) {
  SymbolSequence out = code;
  if (!out.word.empty()) std::rotate(out.word.begin(), out.word.begin() + 1, out.word.end());
  return out;
}

// sigma-equivariance of P^Q on the configuration: re-encode the window
// shifted by Q indices (exact for closed configurations), and independently
// iterate the lifted orbit Q steps per block with the literal map and
// re-encode that. Both must reproduce the left shift of the input code, and
// the iterated times must match the index-shifted ones within 1e-6.
inline ChaosReport verify_shift(const Configuration& cfg, const ConstantsBundle& consts,
                                const ForcingSpec& spec, double M_eff) {
  if (!cfg.closure || !cfg.code)
    throw Error(ErrorKind::Unclassifiable, "coding", "verify_shift",
                "need a closed configuration with a code");
  ChaosReport rep;
  rep.code_in = *cfg.code;
  rep.residual = cfg.residual;

  // route 1: index shift
  rep.code_out = encode(cfg, consts, M_eff, consts.Q);

  // route 2: literal P^Q iteration across one full period plus one block
  const std::int64_t total = cfg.closure->period + consts.Q;
  const auto bd0 = detail::boundary_data_raw(spec, cfg.at(0), cfg.at(1));
  auto orbit = iterate({cfg.at(0), bd0.v0}, total, spec, consts);
  double worst = 0.0;
  for (std::int64_t i = 0; i <= total; ++i)
    worst = std::max(worst, std::abs(orbit[static_cast<std::size_t>(i)].t - cfg.at(i)));
  if (worst > 1e-6)
    throw Error(ErrorKind::OrbitMismatch, "coding", "verify_shift",
                "iterated orbit drifts from configuration by " + std::to_string(worst));
  SymbolSequence iterated;
  const auto p = cfg.closure->period / consts.Q;
  for (std::int64_t k = 0; k < p; ++k) {
    const double d = orbit[static_cast<std::size_t>((k + 2) * consts.Q)].t -
                     orbit[static_cast<std::size_t>((k + 1) * consts.Q)].t;
    iterated.word.push_back(detail::classify_displacement(d, consts, M_eff));
  }

  const auto expected = left_shift(rep.code_in);
  rep.shift_verified = rep.code_out == expected && iterated == expected;
  return rep;
}

// Minimum displacement difference over blocks where the codes differ;
// +infinity when they never do. Codes of different periods are compared over
// the least common multiple of the block counts.
inline double separation(const Configuration& a, const Configuration& b,
                         const ConstantsBundle& consts) {
  const auto da = block_displacements(a, consts);
  const auto db = block_displacements(b, consts);
  if (!a.code || !b.code)
    throw Error(ErrorKind::Unclassifiable, "coding", "separation", "configurations need codes");
  const auto pa = static_cast<std::int64_t>(da.size()), pb = static_cast<std::int64_t>(db.size());
  const std::int64_t l = std::lcm(pa, pb);
  double sep = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < l; ++k) {
    if (a.code->at_block(k) == b.code->at_block(k)) continue;
    sep = std::min(sep, std::abs(da[static_cast<std::size_t>(k % pa)] -
                                 db[static_cast<std::size_t>(k % pb)]));
  }
  return sep;
}

// Finite sample of the invariant set: (t mod 1, E0) at every index.
inline std::vector<std::pair<double, double>> sample_K_set(
    const std::vector<Configuration>& configs, const ForcingSpec& spec,
    const ConstantsBundle& consts) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& cfg : configs) {
    const std::int64_t count = cfg.closure ? cfg.size() : cfg.size() - 1;
    for (std::int64_t n = cfg.n0; n < cfg.n0 + count; ++n) {
      const auto bd = boundary_data(cfg.at(n), cfg.at(n + 1), spec, consts);
      const double t = cfg.at(n);
      pts.emplace_back(t - std::floor(t), bd.E0);
    }
  }
  return pts;
}

}  // namespace bounce
