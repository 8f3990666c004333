#pragma once

// CSV and JSON artifact writers. All doubles go through one %.17g formatter so
// identical runs produce byte-identical files.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounce/coding.hpp"
#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/impact_map.hpp"
#include "bounce/scaffold.hpp"
#include "bounce/stationary.hpp"

namespace bounce {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string code_string(const SymbolSequence& code) {
  std::string s;
  for (int e : code.word) s += e ? '1' : '0';
  return s;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::ConfigError, "cli", "write", "cannot open " + path.string());
  return out;
}

inline nlohmann::json to_json(const ConstantsBundle& c) {
  return {{"g", c.g},     {"v_bar", c.v_bar}, {"K1", c.K1}, {"K", c.K}, {"delta", c.delta},
          {"eps", c.eps}, {"C", c.C},         {"M", c.M},   {"m", c.m}, {"Q", c.Q}};
}

inline void write_orbit_csv(const std::filesystem::path& path,
                            const std::vector<ImpactState>& orbit) {
  auto out = open_out(path);
  out << "n,t,v,E,gap\n";
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    out << i << ',' << fmt(orbit[i].t) << ',' << fmt(orbit[i].v) << ',' << fmt(orbit[i].energy())
        << ',';
    if (i + 1 < orbit.size()) out << fmt(orbit[i + 1].t - orbit[i].t);
    out << '\n';
  }
}

inline void write_scaffold_csv(const std::filesystem::path& path,
                               const std::vector<const ScaffoldSeq*>& seqs) {
  auto out = open_out(path);
  out << "n,value,kind,glue\n";
  for (const auto* s : seqs) {
    for (std::int64_t n = s->n_lo; n <= s->n_hi; ++n) {
      const bool is_glue =
          std::find(s->glue_indices.begin(), s->glue_indices.end(), n) != s->glue_indices.end();
      out << n << ',' << fmt(s->at(n)) << ',' << to_string(s->kind) << ',' << (is_glue ? 1 : 0)
          << '\n';
    }
  }
}

inline void write_configuration_csv(const std::filesystem::path& path, const Configuration& cfg,
                                    const ExtensionField& field, const ScaffoldSeq* lower,
                                    const ScaffoldSeq* upper) {
  auto out = open_out(path);
  out << "n,t,gap,residual_n,lower,upper\n";
  for (std::int64_t n = cfg.n0; n < cfg.n0 + cfg.size(); ++n) {
    out << n << ',' << fmt(cfg.at(n)) << ',';
    if (cfg.closure || n + 1 < cfg.n0 + cfg.size()) out << fmt(cfg.at(n + 1) - cfg.at(n));
    out << ',';
    if (cfg.interior(n)) out << fmt(field.delta_tilde(cfg.at(n - 1), cfg.at(n), cfg.at(n + 1)));
    out << ',';
    if (lower && lower->covers(n)) out << fmt(lower->at(n));
    out << ',';
    if (upper && upper->covers(n)) out << fmt(upper->at(n));
    out << '\n';
  }
}

inline void write_chaos_json(const std::filesystem::path& path, const ChaosReport& rep,
                             const ConstantsBundle& consts, double M_eff) {
  nlohmann::json j;
  j["code_in"] = code_string(rep.code_in);
  j["code_out"] = code_string(rep.code_out);
  j["residual"] = rep.residual;
  j["separation_margin"] = std::isfinite(rep.separation_margin)
                               ? nlohmann::json(rep.separation_margin)
                               : nlohmann::json("inf");
  j["shift_verified"] = rep.shift_verified;
  j["M_eff"] = M_eff;
  j["constants"] = to_json(consts);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [t, E] : rep.K_points) pts.push_back({t, E});
  j["K_points"] = pts;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

inline void write_kset_csv(const std::filesystem::path& path,
                           const std::vector<std::tuple<double, double, std::string, std::int64_t>>&
                               rows) {
  auto out = open_out(path);
  out << "t_mod_1,E,code_id,block_index\n";
  for (const auto& [t, E, code, block] : rows)
    out << fmt(t) << ',' << fmt(E) << ',' << code << ',' << block << '\n';
}

}  // namespace bounce
