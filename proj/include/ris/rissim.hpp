// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ris/channel.hpp"

namespace ris {

// Slowly varying repeated-interaction schedule on s in [0,1]. The step-k
// probe uses s = k/T for k = 1..T; the m-repeated variant presents each
// probe m consecutive times (interaction index k' maps to probe
// [(k'-1)/m] + 1).
struct RISSchedule {
  int d_sys = 0;
  int d_env = 0;
  Hamiltonian h_sys;
  std::function<Mat(double)> h_env_at;   // s -> probe Hamiltonian matrix
  std::function<double(double)> beta_at; // s -> inverse temperature (>= 0)
  std::function<Mat(double)> v_at;       // s -> interaction matrix
  double lambda = 0.0;
  double tau = 1.0;
  int t_steps = 0;  // T
  int m = 1;

  // Effective one-probe channel at parameter s (the plain reduced map, not
  // raised to m).
  Superoperator channel_at(double s, const Tolerances& tol = Tolerances::defaults()) const;
};

// Per-interaction ledger entry. Entropies in nats, energies in the units of
// the Hamiltonians.
struct StepRecord {
  int k = 0;        // probe index, 1..T
  int j = 0;        // copy index, 1..m
  double s = 0.0;   // k / T
  double beta = 0.0;
  double dS = 0.0;      // S(rho_before) - S(rho_after)
  double dQ = 0.0;      // probe energy gain
  double sigma = 0.0;   // entropy production of the step
  double balance_residual = 0.0;  // |dS + sigma - beta dQ|
  double dist_to_invariant = 0.0; // |rho_after - rho_inv(s)|_1
  double x_norm = 0.0;            // |X(s)|_1
  double trace_drift = 0.0;       // |Tr rho_after - 1|
};

struct RunLedger {
  std::vector<StepRecord> steps;
  double sigma_tot = 0.0;
  double dS_tot = 0.0;          // S(rho_initial) - S(rho_final)
  double sum_beta_dQ = 0.0;
  double landauer_gap = 0.0;    // sum beta dQ - dS_tot
  bool complete = false;
  std::string abort_reason;
  Mat final_state;
};

// One interaction: unitary joint step, probe traced out, full entropy
// bookkeeping on the joint space.
std::pair<DensityMatrix, StepRecord> simulate_step(
    const DensityMatrix& rho, const Hamiltonian& h_sys, const Hamiltonian& h_env,
    const Hamiltonian& v, double lambda, double tau, double beta,
    const Tolerances& tol = Tolerances::defaults());

// Executes the full (m-)RIS run. Per-probe data (channel, invariant state,
// X) are computed once per distinct probe. A step error aborts with the
// partial ledger flagged incomplete.
RunLedger run(const RISSchedule& schedule, const DensityMatrix& rho_initial,
              const Tolerances& tol = Tolerances::defaults());

// Distance-to-invariant series of a run; requires every sampled channel
// irreducible and the initial state free of non-invariant peripheral
// components ((P^1_0 + Q_0) rho_i = rho_i).
struct TrackingReport {
  RunLedger ledger;
  std::vector<double> dist;          // per interaction step
  double max_mid_run = 0.0;          // max over k/T in [0.25, 0.75], last copy of each probe
};
TrackingReport adiabatic_state_tracking(const RISSchedule& schedule, const DensityMatrix& rho_initial,
                                        const Tolerances& tol = Tolerances::defaults());

// Built-in C^2 schedule families.
std::function<double(double)> affine_schedule(double a, double b);  // s -> a + b s
// Natural cubic spline through (s_i, y_i); C^2 on [0,1].
std::function<double(double)> tabulated_schedule(std::vector<double> s, std::vector<double> y);

}  // namespace ris
