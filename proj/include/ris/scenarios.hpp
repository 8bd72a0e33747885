// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ris/adiabatic.hpp"
#include "ris/perturbation.hpp"
#include "ris/rissim.hpp"

namespace ris::scenarios {

// Qubit ladder operators in the (ground, excited) basis.
Mat lowering_op();
Mat number_op();

enum class Model { QubitRw, QubitFd, Custom };

struct ScheduleSpec {
  enum class Kind { Affine, Tabulated } kind = Kind::Affine;
  double a = 1.0, b = 0.0;          // affine: a + b s
  std::vector<double> knots_s, knots_y;  // tabulated (natural cubic spline)
  std::function<double(double)> sampler() const;
};

struct ScenarioConfig {
  Model model = Model::QubitRw;
  double e_sys = 1.0;   // E
  double e_env = 0.8;   // E0 (constant part; e0_schedule overrides when set)
  double u1 = 1.0;
  ScheduleSpec beta_schedule;
  bool has_e0_schedule = false;
  ScheduleSpec e0_schedule;
  std::vector<double> lambdas;  // one or more coupling values
  double tau = 0.5;
  std::vector<int> t_list;
  long m = 1;
  bool m_auto = false;
  double m_auto_g = 0.5;
  enum class RhoInit { Invariant, Gibbs, Explicit } rho_init = RhoInit::Invariant;
  double rho_gibbs_beta = 1.0;
  Mat rho_explicit;
  std::uint64_t seed = 0;
  std::string out_dir;
  int workers = 1;
  bool emit_svg = false;
  // custom model operators
  Mat custom_h_sys, custom_h_env, custom_v;
};

// Strict parser: unknown keys are rejected.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Model data at dimensionless time s.
struct ModelData {
  Hamiltonian h_sys;
  Mat h_env;
  Mat v;
  double beta;
};
ModelData build_model(const ScenarioConfig& cfg, double s);

RISSchedule to_schedule(const ScenarioConfig& cfg, double lambda, int t_steps, int m);

// Resolves "auto(G)" by find_m over an s grid; returns cfg.m otherwise.
long resolve_m(const ScenarioConfig& cfg, double lambda,
               const Tolerances& tol = Tolerances::defaults());

// Closed forms for the two-level models.
DensityMatrix rw_invariant_state(double e_sys, double e_env, double beta);
// spr of the contracting part; degenerate when nu tau is a multiple of 2 pi.
struct RwContraction {
  double spr = 0.0;
  bool degenerate = false;
};
RwContraction rw_contraction_spr(double e_sys, double e_env, double lambda, double tau);
DensityMatrix fd_invariant_state(double e_sys, double e_env, double lambda, double tau, double beta);
// Two-branch small-coupling rate coefficient (continuous across e_sys = e_env).
double fd_gamma(double e_sys, double e_env, double tau, double u1 = 1.0);
// First-order coefficient of X for the full-dipole model, in the product
// eigenbasis of h_S + h_E.
Mat fd_first_order_m(double e_sys, double e_env, double tau, double u1, double beta);

// Named checks with one pass/fail verdict each, aggregating the module
// invariants on the configured scenario.
struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};
struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = true;
  std::string json() const;
};
VerifyReport verify_suite(const ScenarioConfig& cfg, const Tolerances& tol = Tolerances::defaults());

struct SweepRow {
  int t_steps = 0;
  double lambda = 0.0;
  long m = 1;
  double sigma_tot = 0.0;
  double landauer_gap = 0.0;
  double max_adiabatic_error = 0.0;  // max mid-run distance to the invariant state
  double max_balance_residual = 0.0;
  double rate_ratio = 0.0;  // sigma_tot / (T * predicted rate), full-dipole only
  double runtime_s = 0.0;
  std::string ledger_csv;
};
struct SweepResult {
  std::vector<SweepRow> rows;
  std::string summary_csv;
};

// Runs every (T, lambda) point, up to cfg.workers at a time. Each point is
// an independent pure run; per-point files are written atomically.
SweepResult sweep(const ScenarioConfig& cfg, const Tolerances& tol = Tolerances::defaults());

// Single-point execution (requires exactly one T and one lambda).
struct RunOutput {
  RunLedger ledger;
  long m = 1;
  std::string ledger_csv;
  std::string totals_json;
};
RunOutput run_scenario(const ScenarioConfig& cfg, const Tolerances& tol = Tolerances::defaults());

// Ledger CSV contract: header
//   k,j,s,beta,dS,dQ,sigma,balance_residual,dist_to_invariant,X_norm
// with shortest round-trip formatting; read_ledger_csv returns the rows
// bit-identically.
void write_ledger_csv(const std::string& path, const RunLedger& ledger);
std::vector<StepRecord> read_ledger_csv(const std::string& path);

// Minimal static SVG polyline chart (data-only plotting).
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<double>& xs, const std::vector<double>& ys,
                     bool log_y = false);

}  // namespace ris::scenarios
