// SPDX-License-Identifier: Apache-2.0
//
// ris-sim: repeated-interaction-system simulator CLI.
//   ris-sim run <config>        execute one (m-)RIS run, emit ledger CSV
//   ris-sim sweep <config>      execute every (T, lambda) point
//   ris-sim spectrum <config> --s <value>   spectral report of the channel
//   ris-sim verify <config>     aggregate invariant checks (exit 2 on failure)
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ris/errors.hpp"
#include "ris/scenarios.hpp"

namespace {

ris::scenarios::ScenarioConfig load_with_overrides(const std::string& path, const std::string& out,
                                                   int workers, std::uint64_t seed, bool seed_set) {
  ris::scenarios::ScenarioConfig cfg = ris::scenarios::load_config(path);
  if (!out.empty()) {
    cfg.out_dir = out;
  } else if (cfg.out_dir.empty()) {
    if (const char* env = std::getenv("RIS_SIM_OUTDIR")) cfg.out_dir = env;
  }
  if (workers > 0) cfg.workers = workers;
  if (seed_set) cfg.seed = seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repeated-interaction-system simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double s_value = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON scenario config")->required();
    sub->add_option("--out", out_dir, "output directory (default: config, else $RIS_SIM_OUTDIR)");
    sub->add_option("--workers", workers, "concurrent sweep workers");
    sub->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
      seed_set = true;
    });
  };

  CLI::App* cmd_run = app.add_subcommand("run", "single run");
  add_common(cmd_run);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run every (T, lambda) point");
  add_common(cmd_sweep);
  CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "channel spectral report");
  add_common(cmd_spectrum);
  cmd_spectrum->add_option("--s", s_value, "dimensionless time in [0,1]")->required();
  CLI::App* cmd_verify = app.add_subcommand("verify", "invariant checks");
  add_common(cmd_verify);

  CLI11_PARSE(app, argc, argv);

  try {
    const ris::scenarios::ScenarioConfig cfg =
        load_with_overrides(config_path, out_dir, workers, seed, seed_set);

    if (cmd_run->parsed()) {
      const ris::scenarios::RunOutput out = ris::scenarios::run_scenario(cfg);
      std::cout << "m = " << out.m << "\n"
                << "steps = " << out.ledger.steps.size() << "\n"
                << "sigma_tot = " << out.ledger.sigma_tot << "\n"
                << "dS_tot = " << out.ledger.dS_tot << "\n"
                << "landauer_gap = " << out.ledger.landauer_gap << "\n";
      if (!out.ledger.complete) {
        std::cerr << "run aborted: " << out.ledger.abort_reason << "\n";
        return 1;
      }
      if (!out.ledger_csv.empty()) std::cout << "ledger = " << out.ledger_csv << "\n";
    } else if (cmd_sweep->parsed()) {
      const ris::scenarios::SweepResult res = ris::scenarios::sweep(cfg);
      std::cout << "T,lambda,m,sigma_tot,landauer_gap,max_adiabatic_error,rate_ratio\n";
      for (const auto& r : res.rows)
        std::cout << r.t_steps << ',' << r.lambda << ',' << r.m << ',' << r.sigma_tot << ','
                  << r.landauer_gap << ',' << r.max_adiabatic_error << ',' << r.rate_ratio << "\n";
      if (!res.summary_csv.empty()) std::cout << "summary = " << res.summary_csv << "\n";
    } else if (cmd_spectrum->parsed()) {
      if (s_value < 0.0 || s_value > 1.0) throw ris::ConfigError("--s must lie in [0,1]");
      const ris::RISSchedule sched =
          ris::scenarios::to_schedule(cfg, cfg.lambdas.front(), 1, 1);
      const ris::Superoperator l = sched.channel_at(s_value);
      const ris::ChannelSpectrum cs = ris::spectral(l);
      nlohmann::json j;
      j["s"] = s_value;
      j["lambda"] = cfg.lambdas.front();
      j["eigenvalues"] = nlohmann::json::array();
      for (const auto& e : cs.eigs) j["eigenvalues"].push_back({e.real(), e.imag()});
      j["z"] = cs.z;
      j["gap"] = std::isfinite(cs.gap) ? cs.gap : -1.0;
      j["ell_spr"] = cs.ell_spr;
      j["ell_norm"] = cs.ell_norm;
      try {
        const ris::DensityMatrix inv = ris::invariant_state(l);
        nlohmann::json rho = nlohmann::json::array();
        for (int i = 0; i < inv.dim(); ++i) {
          nlohmann::json row = nlohmann::json::array();
          for (int c = 0; c < inv.dim(); ++c)
            row.push_back({inv.op()(i, c).real(), inv.op()(i, c).imag()});
          rho.push_back(row);
        }
        j["invariant_state"] = rho;
      } catch (const ris::ReducibleChannel& e) {
        j["invariant_state"] = nullptr;
        j["reducible"] = e.what();
      }
      std::cout << j.dump(2) << "\n";
    } else if (cmd_verify->parsed()) {
      const ris::scenarios::VerifyReport rep = ris::scenarios::verify_suite(cfg);
      std::cout << rep.json() << "\n";
      if (!rep.all_pass) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
