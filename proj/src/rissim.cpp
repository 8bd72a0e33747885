// SPDX-License-Identifier: Apache-2.0
#include "ris/rissim.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris {

Superoperator RISSchedule::channel_at(double s, const Tolerances& tol) const {
  const Hamiltonian he(h_env_at(s), tol);
  const Hamiltonian vv(v_at(s), tol);
  const DensityMatrix xi = gibbs_state(he, beta_at(s), tol);
  return reduced_dynamics(h_sys, he, vv, lambda, tau, xi, tol);
}

namespace {

// Core of one interaction with the probe unitary and Gibbs state prebuilt
// (run() reuses them across the m copies of a probe).
std::pair<DensityMatrix, StepRecord> step_with(const DensityMatrix& rho, const Hamiltonian& h_env,
                                               const Mat& u, const DensityMatrix& xi, double beta,
                                               const Tolerances& tol) {
  const int ds = rho.dim();
  const int de = h_env.dim();
  const Mat joint = kron(rho.op(), xi.op());
  const Mat omega = u * joint * u.adjoint();
  Mat rho_next_op = hermitian_part(partial_trace_env(omega, ds, de));
  const Mat xi_next = partial_trace_sys(omega, ds, de);

  StepRecord rec;
  rec.beta = beta;
  rec.dQ = hs_inner(h_env.op(), xi_next).real() - hs_inner(h_env.op(), xi.op()).real();

  DensityMatrix rho_next(rho_next_op, tol);
  rec.dS = von_neumann_entropy(rho, tol) - von_neumann_entropy(rho_next, tol);

  // sigma = S(U (rho x xi) U* | L(rho) x xi) on the joint space.
  const DensityMatrix omega_u(hermitian_part(omega), tol);
  const DensityMatrix omega_l(hermitian_part(kron(rho_next_op, xi.op())), tol);
  rec.sigma = relative_entropy(omega_u, omega_l, tol);
  rec.balance_residual = std::abs(rec.dS + rec.sigma - beta * rec.dQ);
  rec.trace_drift = std::abs(rho_next.op().trace() - cx{1.0, 0.0});
  return {std::move(rho_next), rec};
}

}  // namespace

std::pair<DensityMatrix, StepRecord> simulate_step(const DensityMatrix& rho,
                                                   const Hamiltonian& h_sys,
                                                   const Hamiltonian& h_env, const Hamiltonian& v,
                                                   double lambda, double tau, double beta,
                                                   const Tolerances& tol) {
  const DensityMatrix xi = gibbs_state(h_env, beta, tol);
  const Mat u = step_unitary(h_sys, h_env, v, lambda, tau, tol);
  return step_with(rho, h_env, u, xi, beta, tol);
}

namespace {

struct ProbeData {
  Hamiltonian h_env;
  Hamiltonian v;
  double beta;
  DensityMatrix xi;
  Mat u;
  std::optional<DensityMatrix> invariant;
  double x_norm = 0.0;
  bool diagnostics_ok = false;
};

ProbeData make_probe(const RISSchedule& sched, double s, const Tolerances& tol) {
  Hamiltonian h_env(sched.h_env_at(s), tol);
  Hamiltonian v(sched.v_at(s), tol);
  const double beta = sched.beta_at(s);
  DensityMatrix xi = gibbs_state(h_env, beta, tol);
  Mat u = step_unitary(sched.h_sys, h_env, v, sched.lambda, sched.tau, tol);
  ProbeData p{std::move(h_env), std::move(v), beta, std::move(xi), std::move(u),
              std::nullopt,     0.0,          false};
  try {
    const Superoperator l = Superoperator::from_map(sched.d_sys, [&](const Mat& x) {
      return partial_trace_env(p.u * kron(x, p.xi.op()) * p.u.adjoint(), sched.d_sys, sched.d_env);
    });
    p.invariant = invariant_state(l, tol);
    const Mat w = kron(p.invariant->op(), p.xi.op());
    p.x_norm = trace_norm(p.u * w * p.u.adjoint() - w);
    p.diagnostics_ok = true;
  } catch (const ReducibleChannel&) {
    // dist_to_invariant / x_norm stay unset; the ledger still runs.
  }
  return p;
}

}  // namespace

RunLedger run(const RISSchedule& schedule, const DensityMatrix& rho_initial, const Tolerances& tol) {
  RunLedger ledger;
  if (schedule.t_steps < 1 || schedule.m < 1)
    throw Error("run: T and m must be positive");
  DensityMatrix rho = rho_initial;
  const double s0 = von_neumann_entropy(rho, tol);

  int cached_k = -1;
  std::optional<ProbeData> probe;
  for (long kp = 1; kp <= long(schedule.t_steps) * schedule.m; ++kp) {
    const int k = int((kp - 1) / schedule.m) + 1;
    const int j = int(kp - long(k - 1) * schedule.m);
    const double s = double(k) / schedule.t_steps;
    if (k != cached_k) {
      probe = make_probe(schedule, s, tol);
      cached_k = k;
    }
    try {
      auto [rho_next, rec] = step_with(rho, probe->h_env, probe->u, probe->xi, probe->beta, tol);
      rec.k = k;
      rec.j = j;
      rec.s = s;
      if (probe->diagnostics_ok) {
        rec.dist_to_invariant = trace_norm(rho_next.op() - probe->invariant->op());
        rec.x_norm = probe->x_norm;
      }
      rho = std::move(rho_next);
      ledger.sigma_tot += rec.sigma;
      ledger.sum_beta_dQ += rec.beta * rec.dQ;
      ledger.steps.push_back(std::move(rec));
    } catch (const Error& e) {
      ledger.abort_reason = e.what();
      ledger.complete = false;
      ledger.final_state = rho.op();
      ledger.dS_tot = s0 - von_neumann_entropy(rho, tol);
      ledger.landauer_gap = ledger.sum_beta_dQ - ledger.dS_tot;
      return ledger;
    }
  }
  ledger.complete = true;
  ledger.final_state = rho.op();
  ledger.dS_tot = s0 - von_neumann_entropy(rho, tol);
  ledger.landauer_gap = ledger.sum_beta_dQ - ledger.dS_tot;
  return ledger;
}

TrackingReport adiabatic_state_tracking(const RISSchedule& schedule,
                                        const DensityMatrix& rho_initial, const Tolerances& tol) {
  // Initial-state condition: no component on peripheral eigenvalues != 1.
  const Superoperator l0 = schedule.channel_at(0.0, tol);
  const ChannelSpectrum cs0 = spectral(l0, tol.peripheral_band, tol);
  const IrreducibilityReport ir = irreducibility(l0, tol);
  if (!ir.irreducible)
    throw ReducibleChannel("adiabatic_state_tracking: channel at s = 0 is not irreducible");
  if (cs0.z > 1) {
    Mat bad(rho_initial.dim(), rho_initial.dim());
    for (int c : cs0.peripheral_indices) {
      const cx e = cs0.cluster_values[std::size_t(c)];
      if (std::abs(e - cx{1.0, 0.0}) < 1e-8) continue;
      const Superoperator pj{rho_initial.dim(), cs0.projectors[std::size_t(c)], false};
      bad += pj.apply(rho_initial.op());
    }
    if (trace_norm(bad) > 1e-9)
      throw Error("adiabatic_state_tracking: initial state has non-invariant peripheral components");
  }

  TrackingReport rep;
  rep.ledger = run(schedule, rho_initial, tol);
  rep.dist.reserve(rep.ledger.steps.size());
  for (const StepRecord& r : rep.ledger.steps) {
    rep.dist.push_back(r.dist_to_invariant);
    const double frac = r.s;
    if (r.j == schedule.m && frac >= 0.25 && frac <= 0.75)
      rep.max_mid_run = std::max(rep.max_mid_run, r.dist_to_invariant);
  }
  return rep;
}

std::function<double(double)> affine_schedule(double a, double b) {
  return [a, b](double s) { return a + b * s; };
}

std::function<double(double)> tabulated_schedule(std::vector<double> s, std::vector<double> y) {
  if (s.size() != y.size() || s.size() < 2)
    throw Error("tabulated_schedule: need at least two knots");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] <= s[i - 1]) throw Error("tabulated_schedule: knots must be increasing");

  // Natural cubic spline second derivatives (tridiagonal solve).
  const std::size_t n = s.size();
  std::vector<double> m2(n, 0.0), rhs(n, 0.0), diag(n, 0.0), sub(n, 0.0), sup(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = s[i] - s[i - 1], h1 = s[i + 1] - s[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m2[i] = (rhs[i] - sup[i] * (i + 2 < n ? m2[i + 1] : 0.0)) / diag[i];
    if (i == 1) break;
  }

  return [s = std::move(s), y = std::move(y), m2 = std::move(m2)](double x) {
    std::size_t i = 1;
    while (i + 1 < s.size() && x > s[i]) ++i;
    const double h = s[i] - s[i - 1];
    const double a = (s[i] - x) / h, b = (x - s[i - 1]) / h;
    return a * y[i - 1] + b * y[i] +
           ((a * a * a - a) * m2[i - 1] + (b * b * b - b) * m2[i]) * h * h / 6.0;
  };
}

}  // namespace ris
