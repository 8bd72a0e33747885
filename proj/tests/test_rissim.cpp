// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ris/errors.hpp"
#include "ris/rissim.hpp"

using namespace ris;

TEST_CASE("decoupled step produces no entropy or heat") {
  const Mat num = scenarios::number_op();
  const Hamiltonian hs(num * cx{1.0, 0.0}), he(num * cx{0.8, 0.0});
  const Hamiltonian v(kron(scenarios::lowering_op().adjoint(), scenarios::lowering_op()) +
                      kron(scenarios::lowering_op(), scenarios::lowering_op().adjoint()));
  std::mt19937_64 rng(51);
  const DensityMatrix rho = random_density(2, rng);
  const auto [rho_next, rec] = simulate_step(rho, hs, he, v, 0.0, 0.7, 1.2);
  CHECK(std::abs(rec.dS) < 1e-10);
  CHECK(std::abs(rec.dQ) < 1e-10);
  CHECK(std::abs(rec.sigma) < 1e-10);
  CHECK(von_neumann_entropy(rho_next) == doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-12));
}

TEST_CASE("balance identity on random qubit steps, both models") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> beta_d(0.1, 3.0), lam_d(0.0, 2.0), tau_d(0.1, 2.0);
  const Mat num = scenarios::number_op();
  const Mat a = scenarios::lowering_op();
  const Mat ad = a.adjoint();
  for (int rep = 0; rep < 60; ++rep) {
    const Hamiltonian hs(num * cx{1.0, 0.0}), he(num * cx{0.8, 0.0});
    const Mat vmat = (rep % 2 == 0) ? (kron(ad, a) + kron(a, ad)) * cx{0.5, 0.0}
                                    : kron(a + ad, a + ad) * cx{0.5, 0.0};
    const DensityMatrix rho = random_density(2, rng, 0.02);
    const auto [rho_next, rec] =
        simulate_step(rho, hs, he, Hamiltonian(vmat), lam_d(rng), tau_d(rng), beta_d(rng));
    CHECK(rec.balance_residual <= 1e-9);
    CHECK(rec.sigma >= -1e-9);
    CHECK(rec.trace_drift <= 1e-12);
  }
}

TEST_CASE("sigma against an independently coded relative entropy route") {
  // Oracle: S(omega_U | rho' (x) xi) = -S(omega_U) - Tr(omega_U (log rho' (x) I + I (x) log xi))
  // using log(A (x) B) = log A (x) I + I (x) log B for the product state.
  const ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.2, 0.5, 1, 1);
  const Hamiltonian he(sched.h_env_at(0.0));
  const Hamiltonian v(sched.v_at(0.0));
  std::mt19937_64 rng(53);
  const DensityMatrix rho = random_density(2, rng, 0.05);
  const double beta = 1.0;
  const auto [rho_next, rec] = simulate_step(rho, sched.h_sys, he, v, 0.2, 0.5, beta);

  const DensityMatrix xi = gibbs_state(he, beta);
  const Mat u = step_unitary(sched.h_sys, he, v, 0.2, 0.5);
  const Mat omega_u = u * kron(rho.op(), xi.op()) * u.adjoint();
  const DensityMatrix omega_state(hermitian_part(omega_u));
  auto log_of = [](const Mat& h) {
    return herm_func(h, [](double w) { return cx{std::log(w), 0.0}; });
  };
  const Mat log_prod = kron(log_of(rho_next.op()), Mat::identity(2)) +
                       kron(Mat::identity(2), log_of(xi.op()));
  const double oracle =
      -von_neumann_entropy(omega_state) - (omega_state.op() * log_prod).trace().real();
  CHECK(rec.sigma == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("run reduces to simulate_step at T = 1, m = 1") {
  ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.3, 0.5, 1, 1);
  std::mt19937_64 rng(54);
  const DensityMatrix rho = random_density(2, rng, 0.05);
  const RunLedger led = run(sched, rho);
  CHECK(led.complete);
  CHECK(led.steps.size() == 1);
  const Hamiltonian he(sched.h_env_at(1.0));
  const Hamiltonian v(sched.v_at(1.0));
  const auto [rho_next, rec] = simulate_step(rho, sched.h_sys, he, v, 0.3, 0.5, sched.beta_at(1.0));
  CHECK(led.steps[0].sigma == doctest::Approx(rec.sigma).epsilon(1e-12));
  CHECK((led.final_state - rho_next.op()).max_abs() < 1e-14);
}

TEST_CASE("ledger accounting: telescoping, Landauer gap, trace drift") {
  ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.4, 0.5, 12, 3);
  std::mt19937_64 rng(55);
  const DensityMatrix rho0 = random_density(2, rng, 0.05);
  const RunLedger led = run(sched, rho0);
  CHECK(led.complete);
  CHECK(led.steps.size() == 12 * 3);

  double sum_dS = 0.0, sum_sigma = 0.0, sum_bdq = 0.0;
  for (const StepRecord& r : led.steps) {
    sum_dS += r.dS;
    sum_sigma += r.sigma;
    sum_bdq += r.beta * r.dQ;
    CHECK(r.sigma >= -1e-9);
    CHECK(r.balance_residual <= 1e-9);
    CHECK(r.trace_drift <= 1e-10);
  }
  // telescoping of the entropy differences
  CHECK(std::abs(sum_dS - led.dS_tot) < 1e-9);
  CHECK(led.sigma_tot == doctest::Approx(sum_sigma).epsilon(1e-12));
  CHECK(led.landauer_gap == doctest::Approx(sum_bdq - led.dS_tot).epsilon(1e-9));
  CHECK(led.landauer_gap >= -1e-8);
  CHECK(std::abs(led.landauer_gap - led.sigma_tot) < 1e-8);

  // m-RIS index map: copies of probe k share s = k/T
  for (const StepRecord& r : led.steps) {
    CHECK(r.s == doctest::Approx(double(r.k) / 12).epsilon(1e-15));
    CHECK(r.j >= 1);
    CHECK(r.j <= 3);
  }
}

TEST_CASE("m-RIS window equals the m-fold channel power") {
  // Constant schedule: running m copies of a probe is exactly L^m.
  ris::RISSchedule sched = oracles::fd_schedule(0.9, 0.8, 0.5, 0.5, 1, 5, 1.0, 0.0);
  std::mt19937_64 rng(56);
  const DensityMatrix rho0 = random_density(2, rng, 0.05);
  const RunLedger led = run(sched, rho0);
  CHECK(led.complete);
  const Superoperator l5 = power(sched.channel_at(1.0), 5);
  CHECK((led.final_state - l5.apply(rho0.op())).max_abs() < 1e-12);
}

TEST_CASE("abort leaves a flagged partial ledger") {
  // A pure initial state makes the joint state singular; the relative
  // entropy is ill-defined and the run must stop with the reason recorded.
  ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.4, 0.5, 4, 1);
  Mat pure(2, 2);
  pure(0, 0) = 1.0;
  const RunLedger led = run(sched, DensityMatrix(pure));
  CHECK(!led.complete);
  CHECK(led.steps.empty());
  CHECK(led.abort_reason.find("not faithful") != std::string::npos);
}

TEST_CASE("stationary tracking stays on the invariant state") {
  ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.9, 0.5, 8, 2, 1.0, 0.0);  // constant beta
  const DensityMatrix rho0 = invariant_state(sched.channel_at(0.5));
  const TrackingReport rep = adiabatic_state_tracking(sched, rho0);
  for (double d : rep.dist) CHECK(d <= 1e-9);
}

TEST_CASE("tracking distance halves when T doubles") {
  std::vector<double> t_values, dists;
  double prev = 0.0;
  for (int t_steps : {48, 96, 192}) {
    ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.9, 0.5, t_steps, 24);
    const DensityMatrix rho0 = invariant_state(sched.channel_at(0.0));
    const TrackingReport rep = adiabatic_state_tracking(sched, rho0);
    t_values.push_back(double(t_steps));
    dists.push_back(rep.max_mid_run);
    if (prev > 0.0) {
      const double factor = prev / rep.max_mid_run;
      CHECK(factor > 1.6);
      CHECK(factor < 2.5);
    }
    prev = rep.max_mid_run;
  }
  const double slope = oracles::loglog_slope(t_values, dists);
  CHECK(slope > -1.3);
  CHECK(slope < -0.7);
}

TEST_CASE("initial contracting component decays inside the theoretical envelope") {
  const int t_steps = 64;
  const long m = 24;
  ris::RISSchedule sched = oracles::rw_schedule(1.0, 0.8, 0.9, 0.5, t_steps, int(m));
  const Superoperator l0 = sched.channel_at(0.0);
  const ChannelSpectrum cs0 = spectral(power(l0, m));
  const DensityMatrix inv0 = invariant_state(l0);

  // rho_i = inv + contracting part
  std::mt19937_64 rng(57);
  Mat defect = random_hermitian(2, rng);
  defect -= Mat::identity(2) * (defect.trace() / 2.0);
  const Superoperator q0{2, cs0.contracting_projector, false};
  Mat qpart = q0.apply(defect);
  qpart = hermitian_part(qpart) * cx{0.05 / std::max(1e-12, trace_norm(qpart)), 0.0};
  const DensityMatrix rho0(inv0.op() + qpart);
  const double q_mass = trace_norm(qpart);

  const TrackingReport rep = adiabatic_state_tracking(sched, rho0);
  const double ell = cs0.ell_norm + 5e-3;  // estimator slack
  // envelope 2 |Q0 rho|_1 ell^k + C/T on the per-probe distances
  const double c_over_t = 25.0 / t_steps;
  for (const StepRecord& r : rep.ledger.steps) {
    if (r.j != int(m)) continue;
    const double envelope = 2.0 * q_mass * std::pow(ell, r.k) + c_over_t;
    CHECK(r.dist_to_invariant <= envelope);
  }
}

TEST_CASE("full-dipole per-step entropy follows the small-coupling rate at varying beta") {
  // beta(s) = 1 + s; each mid-run step's sigma tracks
  // lambda^2 gamma (beta_k E0/2) tanh(beta_k E0/2).
  const double lam = 0.05, tau = 0.5, e_sys = 0.9, e_env = 0.8;
  ris::RISSchedule sched = oracles::fd_schedule(e_sys, e_env, lam, tau, 64, 16);
  const DensityMatrix rho0 = invariant_state(sched.channel_at(0.0));
  const RunLedger led = run(sched, rho0);
  const double gamma = scenarios::fd_gamma(e_sys, e_env, tau);
  for (const StepRecord& r : led.steps) {
    if (r.s < 0.2 || r.s > 0.8) continue;
    const double x = r.beta * e_env / 2.0;
    const double pred = lam * lam * gamma * x * std::tanh(x);
    CHECK(std::abs(r.sigma - pred) / pred < 0.15);
  }
}

TEST_CASE("schedule families") {
  const auto aff = affine_schedule(1.0, 1.0);
  CHECK(aff(0.5) == doctest::Approx(1.5).epsilon(1e-15));
  // the natural cubic spline reproduces affine data exactly
  const auto tab = tabulated_schedule({0.0, 0.3, 0.7, 1.0}, {1.0, 1.3, 1.7, 2.0});
  for (double s : {0.0, 0.15, 0.5, 0.85, 1.0})
    CHECK(tab(s) == doctest::Approx(1.0 + s).epsilon(1e-12));
  CHECK_THROWS_AS(tabulated_schedule({0.0, 0.0}, {1.0, 2.0}), Error);
}
