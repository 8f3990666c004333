#pragma once

// Experiment configuration: JSON file with the forcing series, tolerance
// knobs, optional constant overrides, the code list and output location.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounce/constants.hpp"
#include "bounce/errors.hpp"
#include "bounce/forcing.hpp"
#include "bounce/scaffold.hpp"

namespace bounce {

struct Overrides {
  std::optional<double> K1, v_bar, K, delta, eps, C, M;
  std::optional<std::int64_t> m;
  std::optional<int> Q;
};

struct ExperimentConfig {
  double g = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double tol_root = 1e-12;
  double tol_quadrature = 1e-10;
  double tol_flow_residual = 1e-8;

  Overrides overrides;
  std::vector<SymbolSequence> codes;
  std::vector<int> sweep_Q;

  // initial state for the `orbit` command
  double orbit_t0 = 0.0;
  double orbit_v0 = 0.0;
  std::int64_t orbit_steps = 0;

  std::string output_dir = "out";
  std::uint64_t seed = 1;

  ForcingSpec forcing() const { return ForcingSpec(g, cos_coeffs, sin_coeffs); }
};

inline SymbolSequence parse_code(const std::string& s) {
  SymbolSequence code;
  for (char ch : s) {
    if (ch == '0') code.word.push_back(0);
    else if (ch == '1') code.word.push_back(1);
    else
      throw Error(ErrorKind::ConfigError, "cli", "parse_code",
                  "code words are over {0,1}, got '" + s + "'");
  }
  if (code.word.empty())
    throw Error(ErrorKind::ConfigError, "cli", "parse_code", "empty code word");
  return code;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::ConfigError, "cli", "load_config", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ConfigError, "cli", "load_config", e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("forcing")) {
    const auto& f = j["forcing"];
    cfg.g = f.value("g", 1.0);
    cfg.cos_coeffs = f.value("cos_coeffs", std::vector<double>{});
    cfg.sin_coeffs = f.value("sin_coeffs", std::vector<double>{});
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    cfg.tol_root = t.value("root", cfg.tol_root);
    cfg.tol_quadrature = t.value("quadrature", cfg.tol_quadrature);
    cfg.tol_flow_residual = t.value("flow_residual", cfg.tol_flow_residual);
  }
  if (j.contains("overrides")) {
    const auto& o = j["overrides"];
    auto opt = [&](const char* key) -> std::optional<double> {
      if (o.contains(key)) return o[key].get<double>();
      return std::nullopt;
    };
    cfg.overrides.K1 = opt("K1");
    cfg.overrides.v_bar = opt("v_bar");
    cfg.overrides.K = opt("K");
    cfg.overrides.delta = opt("delta");
    cfg.overrides.eps = opt("eps");
    cfg.overrides.C = opt("C");
    cfg.overrides.M = opt("M");
    if (o.contains("m")) cfg.overrides.m = o["m"].get<std::int64_t>();
    if (o.contains("Q")) cfg.overrides.Q = o["Q"].get<int>();
  }
  for (const auto& s : j.value("codes", std::vector<std::string>{}))
    cfg.codes.push_back(parse_code(s));
  cfg.sweep_Q = j.value("sweep_Q", std::vector<int>{});
  if (j.contains("orbit")) {
    const auto& o = j["orbit"];
    cfg.orbit_t0 = o.value("t0", 0.0);
    cfg.orbit_v0 = o.value("v0", 0.0);
    cfg.orbit_steps = o.value("steps", std::int64_t{0});
  }
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.seed = j.value("seed", std::uint64_t{1});
  return cfg;
}

}  // namespace bounce
