// Command-line front end: estimates the constants of the construction, runs
// orbits, builds scaffolds, and drives the full chaos pipeline per code word.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bounce/coding.hpp"
#include "bounce/config.hpp"
#include "bounce/pipeline.hpp"
#include "bounce/reports.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_constants(const bounce::Experiment& ex, const fs::path& dir) {
  json j;
  j["constants"] = bounce::to_json(ex.consts);
  j["provenance"] = ex.provenance;
  auto out = bounce::open_out(dir / "constants.json");
  out << j.dump(2) << '\n';
}

int run_constants(const bounce::ExperimentConfig& cfg, const fs::path& dir) {
  auto ex = bounce::make_experiment(cfg.forcing(), cfg.overrides, cfg.tol_quadrature);
  write_constants(ex, dir);
  std::cout << "constants written: K=" << ex.consts.K << " delta=" << ex.consts.delta
            << " C=" << ex.consts.C << " M=" << ex.consts.M << " m=" << ex.consts.m
            << " Q=" << ex.consts.Q << "\n";
  return 0;
}

int run_orbit(const bounce::ExperimentConfig& cfg, const fs::path& dir) {
  auto ex = bounce::make_experiment(cfg.forcing(), cfg.overrides, cfg.tol_quadrature);
  const auto orbit =
      bounce::iterate({cfg.orbit_t0, cfg.orbit_v0}, cfg.orbit_steps, ex.spec, ex.consts);
  bounce::write_orbit_csv(dir / "orbit.csv", orbit);
  std::cout << "orbit.csv: " << orbit.size() << " states\n";
  return 0;
}

int run_scaffold(const bounce::ExperimentConfig& cfg, const fs::path& dir) {
  auto ex = bounce::make_experiment(cfg.forcing(), cfg.overrides, cfg.tol_quadrature);
  auto set = bounce::build_scaffold_set(ex, 2, cfg.tol_quadrature);
  bounce::write_scaffold_csv(dir / "scaffold.csv",
                             {&set.sub, &set.super, &set.envs.lower, &set.envs.upper});
  write_constants(ex, dir);
  std::cout << "scaffold.csv written, M_eff=" << set.envs.M_eff << "\n";
  return 0;
}

int run_chaos(const bounce::ExperimentConfig& cfg, const fs::path& dir, bool quiet = false) {
  if (cfg.codes.empty())
    throw bounce::Error(bounce::ErrorKind::ConfigError, "cli", "chaos", "no codes in config");
  auto ex = bounce::make_experiment(cfg.forcing(), cfg.overrides, cfg.tol_quadrature);
  write_constants(ex, dir);
  std::int64_t max_p = 1;
  for (const auto& code : cfg.codes)
    max_p = std::max<std::int64_t>(max_p, static_cast<std::int64_t>(code.word.size()));
  auto set = bounce::build_scaffold_set(ex, max_p, cfg.tol_quadrature);

  std::vector<bounce::CodeRun> runs;
  for (const auto& code : cfg.codes)
    runs.push_back(bounce::run_code(ex, set, code, cfg.tol_flow_residual, cfg.tol_quadrature));
  bounce::fill_separation_margins(runs, ex.consts);

  bool all_ok = true;
  std::vector<std::tuple<double, double, std::string, std::int64_t>> kset;
  bounce::ExtensionField field(ex.spec, ex.consts, cfg.tol_quadrature);
  for (const auto& run : runs) {
    const auto id = bounce::code_string(run.code);
    bounce::write_configuration_csv(dir / ("config_" + id + ".csv"), run.config, field,
                                    &run.x_lower, &run.x_upper);
    bounce::write_chaos_json(dir / ("chaos_" + id + ".json"), run.report, ex.consts, run.M_eff);
    for (std::size_t i = 0; i < run.report.K_points.size(); ++i)
      kset.emplace_back(run.report.K_points[i].first, run.report.K_points[i].second, id,
                        static_cast<std::int64_t>(i) / ex.consts.Q);
    const bool ok = run.report.shift_verified && run.certificate.pass();
    all_ok = all_ok && ok;
    if (!quiet)
      std::cout << "code " << id << ": residual=" << run.config.residual
                << " certified=" << (run.certificate.pass() ? "yes" : "no")
                << " shift_verified=" << (run.report.shift_verified ? "yes" : "no") << "\n";
  }
  bounce::write_kset_csv(dir / "kset.csv", kset);
  return all_ok ? 0 : 3;
}

int run_sweep(const bounce::ExperimentConfig& cfg, const fs::path& dir) {
  if (cfg.sweep_Q.empty())
    throw bounce::Error(bounce::ErrorKind::ConfigError, "cli", "sweep", "no sweep_Q in config");
  int rc = 0;
  std::vector<std::pair<double, double>> bands;  // (E_min, E_max) per Q
  for (int Q : cfg.sweep_Q) {
    bounce::ExperimentConfig sub_cfg = cfg;
    sub_cfg.overrides.Q = Q;
    sub_cfg.overrides.m = static_cast<std::int64_t>(Q) * Q;
    const fs::path sub_dir = dir / ("Q" + std::to_string(Q));
    rc = std::max(rc, run_chaos(sub_cfg, sub_dir, true));
    // collect the energy band of this run
    double lo = 1e300, hi = -1e300;
    for (const auto& code : sub_cfg.codes) {
      std::ifstream in(sub_dir / ("chaos_" + bounce::code_string(code) + ".json"));
      json j;
      in >> j;
      for (const auto& pt : j["K_points"]) {
        lo = std::min(lo, pt[1].get<double>());
        hi = std::max(hi, pt[1].get<double>());
      }
    }
    bands.emplace_back(lo, hi);
    std::cout << "Q=" << Q << ": energy band [" << lo << ", " << hi << "]\n";
  }
  for (std::size_t i = 0; i < bands.size(); ++i)
    for (std::size_t j = i + 1; j < bands.size(); ++j) {
      const bool disjoint = bands[i].second < bands[j].first || bands[j].second < bands[i].first;
      if (!disjoint) {
        std::cout << "energy bands overlap between sweep entries " << i << " and " << j << "\n";
        rc = std::max(rc, 3);
      }
    }
  return rc;
}

int run_selftest(const bounce::ExperimentConfig& cfg) {
  auto ex = bounce::make_experiment(cfg.forcing(), cfg.overrides, cfg.tol_quadrature);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  std::uniform_real_distribution<double> uv(ex.consts.v_bar + 0.5, ex.consts.v_bar + 50.0);
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // map vs free-flight oracle
  {
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      bounce::ImpactState s{ut(rng), uv(rng)};
      const auto a = bounce::step(s, ex.spec, ex.consts);
      const auto b = bounce::free_flight_oracle(s, ex.spec);
      worst = std::max({worst, std::abs(a.t - b.t), std::abs(a.v - b.v)});
    }
    check("step agrees with free-flight oracle (1e-9)", worst < 1e-9);
  }
  // cylinder equivariance
  {
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      bounce::ImpactState s{ut(rng), uv(rng)};
      const auto a = bounce::step(s, ex.spec, ex.consts);
      const auto b = bounce::step({s.t + 1.0, s.v}, ex.spec, ex.consts);
      worst = std::max({worst, std::abs(b.t - a.t - 1.0), std::abs(b.v - a.v)});
    }
    check("step commutes with integer time shifts (1e-9)", worst < 1e-9);
  }
  // monotonicity of the extended recurrence
  {
    bounce::ExtensionField field(ex.spec, ex.consts, cfg.tol_quadrature);
    std::uniform_real_distribution<double> ug(-2.0, 8.0);
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const double b = 10.0 * ut(rng), a = b - ex.consts.K + ug(rng), c = b + ex.consts.K - ug(rng);
      const double inc = 0.1 + ut(rng);
      ok = field.delta_tilde(a + inc, b, c) > field.delta_tilde(a, b, c) &&
           field.delta_tilde(a, b, c + inc) > field.delta_tilde(a, b, c);
    }
    check("extended recurrence increases in outer arguments", ok);
  }
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bouncing-ball impact map toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool have_seed = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (default: from config)");
  app.add_option("--seed", seed, "override RNG seed")->each([&](const std::string&) {
    have_seed = true;
  });

  auto* c_constants = app.add_subcommand("constants", "estimate the constants bundle");
  auto* c_orbit = app.add_subcommand("orbit", "iterate the map from the configured state");
  auto* c_scaffold = app.add_subcommand("scaffold", "build sub/super solutions and envelopes");
  auto* c_chaos = app.add_subcommand("chaos", "full pipeline for each configured code");
  auto* c_sweep = app.add_subcommand("sweep", "repeat chaos across the configured Q values");
  auto* c_selftest = app.add_subcommand("selftest", "randomized property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = bounce::load_config(config_path);
    if (have_seed) cfg.seed = seed;
    const fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);
    if (c_constants->parsed()) return run_constants(cfg, dir);
    if (c_orbit->parsed()) return run_orbit(cfg, dir);
    if (c_scaffold->parsed()) return run_scaffold(cfg, dir);
    if (c_chaos->parsed()) return run_chaos(cfg, dir);
    if (c_sweep->parsed()) return run_sweep(cfg, dir);
    if (c_selftest->parsed()) return run_selftest(cfg);
  } catch (const bounce::Error& e) {
    json err{{"module", e.module_name()},
             {"operation", e.operation()},
             {"kind", std::string(bounce::to_string(e.kind()))},
             {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"module", "cli"}, {"operation", "main"}, {"kind", "Unexpected"},
             {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
