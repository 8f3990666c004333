#pragma once

// End-to-end orchestration shared by the CLI and the acceptance suite:
// normalize the forcing, estimate or override the constants, build scaffolds
// and envelopes once per (m, Q), then run the per-code chain
// envelopes -> find_between -> certify -> encode -> verify_shift.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bounce/coding.hpp"
#include "bounce/config.hpp"
#include "bounce/constants.hpp"
#include "bounce/extension.hpp"
#include "bounce/forcing.hpp"
#include "bounce/generating.hpp"
#include "bounce/scaffold.hpp"
#include "bounce/stationary.hpp"

namespace bounce {

struct Experiment {
  ForcingSpec spec;
  Anchors anchors;
  ConstantsBundle consts;
  nlohmann::json provenance;
};

inline std::int64_t scaffold_window_for(const ConstantsBundle& c, std::int64_t w_env) {
  // must clear both splice indices and give the envelopes a 2x margin
  const std::int64_t n_plus_bound = c.m / 2 + 4;
  return std::max<std::int64_t>(2 * w_env + 2, n_plus_bound + 4);
}

// Constants pipeline. Estimated values can be individually overridden; the
// final bundle must pass validation either way. When (m, Q) are estimated,
// M starts from the analytic envelope constant and is raised to the observed
// M_eff if the built envelopes demand it.
inline Experiment make_experiment(const ForcingSpec& raw, const Overrides& ov = {},
                                  double quad_tol = 1e-10) {
  auto [spec, anchors] = normalize(raw);
  nlohmann::json prov;
  prov["phase_shift"] = spec.phase_shift();
  prov["anchors"] = {{"t_bar0", anchors.t_bar0},
                     {"t_star", anchors.t_star},
                     {"t_sharp", anchors.t_sharp}};

  ConstantsBundle c;
  c.g = spec.g();
  c.eps = ov.eps.value_or(1.0);
  if (ov.K1 && ov.v_bar) {
    c.K1 = *ov.K1;
    c.v_bar = *ov.v_bar;
    prov["domain"] = "overridden";
  } else {
    const auto dom = estimate_domain(spec);
    c.K1 = ov.K1.value_or(dom.K1);
    c.v_bar = ov.v_bar.value_or(dom.v_bar);
    prov["domain"] = {{"mono_floor", dom.mono_floor}, {"K1", dom.K1}, {"v_bar", dom.v_bar}};
  }
  if (ov.K && ov.delta) {
    c.K = *ov.K;
    c.delta = *ov.delta;
    prov["twist"] = "overridden";
  } else {
    const auto tw = estimate_twist(spec, c.K1, c.eps);
    c.K = ov.K.value_or(tw.K);
    c.delta = ov.delta.value_or(tw.delta);
    prov["twist"] = {{"K", tw.K}, {"delta", tw.delta}, {"grid_min", tw.grid_min}};
  }
  if (ov.C) {
    c.C = *ov.C;
    prov["C"] = "overridden";
  } else {
    ExtensionField field(spec, c, quad_tol);
    c.C = estimate_C(field);
    prov["C"] = c.C;
  }

  const double M_analytic = std::max(2.25 - anchors.t_star, 2.25 + anchors.t_sharp);
  prov["M_analytic"] = M_analytic;
  c.M = ov.M.value_or(M_analytic);
  if (ov.m && ov.Q) {
    c.m = *ov.m;
    c.Q = *ov.Q;
  } else {
    // M may grow with the observed envelopes; re-solve until stable
    for (int round = 0; round < 4; ++round) {
      auto [m, Q] = solve_constants(c.K, c.C, c.M);
      c.m = ov.m.value_or(m);
      c.Q = ov.Q ? *ov.Q : Q;
      ExtensionField field(spec, c, quad_tol);
      const std::int64_t w_env = 6 * c.Q;
      const std::int64_t w_scaffold = scaffold_window_for(c, w_env);
      auto sub = build_scaffold(SeqKind::sub, field, anchors, w_scaffold);
      auto super = build_scaffold(SeqKind::super, field, anchors, w_scaffold);
      auto envs = envelopes(sub, super, anchors, c, w_env);
      prov["M_eff"] = envs.M_eff;
      if (envs.M_eff <= c.M + 1e-12) break;
      c.M = envs.M_eff;
    }
  }
  c.validate();
  prov["constants"] = {{"g", c.g}, {"v_bar", c.v_bar}, {"K1", c.K1},   {"K", c.K},
                       {"delta", c.delta},             {"eps", c.eps}, {"C", c.C},
                       {"M", c.M}, {"m", c.m},         {"Q", c.Q}};
  return {std::move(spec), anchors, c, std::move(prov)};
}

struct CodeRun {
  SymbolSequence code;
  Configuration config;
  ChaosReport report;
  CertifyReport certificate;
  ScaffoldSeq x_lower, x_upper;
  double M_eff;
};

// Scaffolds, plain envelopes and M_eff depend only on (m, Q); build them once
// and reuse across codes.
struct ScaffoldSet {
  ScaffoldSeq sub, super;
  EnvelopePair envs;
};

inline ScaffoldSet build_scaffold_set(const Experiment& ex, std::int64_t max_code_period,
                                      double quad_tol = 1e-10) {
  ExtensionField field(ex.spec, ex.consts, quad_tol);
  const std::int64_t w_env =
      std::max<std::int64_t>((max_code_period + 2) * ex.consts.Q + ex.consts.Q, 6 * ex.consts.Q);
  const std::int64_t w_scaffold = scaffold_window_for(ex.consts, w_env);
  ScaffoldSet set;
  set.sub = build_scaffold(SeqKind::sub, field, ex.anchors, w_scaffold);
  set.super = build_scaffold(SeqKind::super, field, ex.anchors, w_scaffold);
  set.envs = envelopes(set.sub, set.super, ex.anchors, ex.consts, w_env);
  return set;
}

inline CodeRun run_code(const Experiment& ex, const ScaffoldSet& set, const SymbolSequence& code,
                        double flow_tol = 1e-8, double quad_tol = 1e-10) {
  ExtensionField field(ex.spec, ex.consts, quad_tol);
  const auto p = static_cast<std::int64_t>(code.word.size());
  const std::int64_t w_x = (p + 1) * ex.consts.Q + ex.consts.Q;
  auto [xl, xu] = symbolic_envelopes(code, set.envs, ex.consts, w_x);

  CodeRun run;
  run.code = code;
  run.M_eff = set.envs.M_eff;
  FindOptions opt;
  opt.tol = flow_tol;
  run.config = find_between(xl, xu, code, ex.consts, field, set.envs.M_eff, opt);
  run.certificate = certify(run.config, ex.consts, &xl, &xu, set.envs.M_eff);
  run.report = verify_shift(run.config, ex.consts, ex.spec, set.envs.M_eff);
  run.report.K_points = sample_K_set({run.config}, ex.spec, ex.consts);
  run.x_lower = std::move(xl);
  run.x_upper = std::move(xu);
  return run;
}

// Pairwise separation margins: for each run, min over the other runs of the
// block-displacement separation, minus 8 M_eff.
inline void fill_separation_margins(std::vector<CodeRun>& runs, const ConstantsBundle& consts) {
  for (std::size_t i = 0; i < runs.size(); ++i) {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < runs.size(); ++j) {
      if (i == j) continue;
      const double sep = separation(runs[i].config, runs[j].config, consts);
      if (std::isfinite(sep)) margin = std::min(margin, sep - 8.0 * runs[i].M_eff);
    }
    runs[i].report.separation_margin = margin;
  }
}

}  // namespace bounce
