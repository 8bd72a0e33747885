// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "ris/channel.hpp"

namespace ris {

// Clustered spectral decomposition of a faithful state eta = sum_i mu_i p_i.
// Numerically coincident eigenvalues are merged so the divided difference
// (log mu_i - log mu_j)/(mu_i - mu_j) never hits its removable singularity.
struct EtaSpectral {
  std::vector<double> mu;  // cluster eigenvalues, ascending
  std::vector<Mat> p;      // Hermitian idempotent cluster projectors
  double inf_sp = 0.0;
  int dim = 0;

  static EtaSpectral from_state(const DensityMatrix& eta,
                                const Tolerances& tol = Tolerances::defaults());
};

// Bilinear form
//   F_eta(A, B) = sum_i Tr(A p_i B p_i) / (2 mu_i)
//               + sum_{i<j} Tr(A p_j B p_i) (log mu_i - log mu_j)/(mu_i - mu_j).
// Both arguments must be traceless within 1e-10 (NonTraceless otherwise; the
// expansion acquires an extra Tr(D1 - D2) term that this module does not
// model). Real and nonnegative for Hermitian A = B.
cx f_eta(const EtaSpectral& eta, const Mat& a, const Mat& b);
double f_eta_quadratic(const EtaSpectral& eta, const Mat& a);

// Second-order expansion check: compares S(eta + D1 | eta + D2) against
// F_eta(D1 - D2). The remainder is cubic in the perturbation size.
struct ExpansionCheck {
  double exact = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  double d_scale = 0.0;  // |D1| + |D2| (operator norm)
};
ExpansionCheck entropy_expansion_check(const DensityMatrix& eta, const Mat& d1, const Mat& d2,
                                       const Tolerances& tol = Tolerances::defaults());

// X = U (rho_inv (x) xi) U* - rho_inv (x) xi.
Mat x_of_s(const Mat& u, const DensityMatrix& rho_inv, const DensityMatrix& xi);

// First-order coefficient of X in the coupling: requires the decoupled
// invariant data, [rho0 (x) xi, h0] = 0. pi_i / E_i are the spectral
// projectors and eigenvalues of h0 = h_S (x) Id + Id (x) h_E; energy levels
// closer than 1e-10 across distinct clusters raise NearDegenerateLevels.
Mat first_order_m(const Hamiltonian& h_sys, const Hamiltonian& h_env, const Hamiltonian& v,
                  double tau, const Mat& rho_inv_0, const Mat& rho_inv_1, const DensityMatrix& xi,
                  const Tolerances& tol = Tolerances::defaults());

// lambda-expansion of the invariant state by Richardson-extrapolated central
// differences at +-h, +-2h. The channel family must be irreducible at every
// sampled lambda != 0.
struct InvariantExpansion {
  Mat rho0;
  Mat rho1;
  double err0 = 0.0;  // Richardson error estimates
  double err1 = 0.0;
};
InvariantExpansion invariant_state_expansion(const std::function<Superoperator(double)>& family,
                                             double h = 1e-3,
                                             const Tolerances& tol = Tolerances::defaults());

// Detailed balance check. Two quantities are scored:
//   relation_deviation: the KMS-dual map
//       rho -> r^{1/2} L^*( r^{-1/2} rho r^{-1/2} ) r^{1/2},  r = rho_inv,
//     against the reversed reduced dynamics rho -> Tr_E(U^* (rho (x) xi) U)
//     on matrix units. X = 0 implies this relation; the converse does not
//     hold (time-reversal-symmetric step data satisfy the relation with
//     X != 0, and both qubit models are of that kind).
//   x_norm: |U (rho_inv (x) xi) U^* - rho_inv (x) xi|_1, the quantity whose
//     vanishing characterizes detailed balance.
// max_deviation is the larger of the two and drives the verdict.
struct KmsDualReport {
  double relation_deviation = 0.0;
  double x_norm = 0.0;
  double max_deviation = 0.0;
  bool detailed_balance = false;
};
KmsDualReport kms_dual_check(const Superoperator& l, const DensityMatrix& rho_inv, const Mat& u,
                             const DensityMatrix& xi, double tol_dev = 1e-8,
                             const Tolerances& tol = Tolerances::defaults());

// Small-coupling per-step entropy production:
//   lambda^2 F0(M,M) + F0(D,D) - lambda F0(D,M) - lambda F0(M,D)
// with F0 built on eta = rho0 (x) xi. The admissibility threshold is
// delta = inf sp(eta) / 16; predictions outside it carry admissible = false.
struct SmallCouplingPrediction {
  double predicted = 0.0;
  double delta_threshold = 0.0;
  bool admissible = false;
};
SmallCouplingPrediction sigma_small_coupling(const EtaSpectral& eta0, const Mat& m_op,
                                             const Mat& d_op, double lambda, double x_norm_1);

}  // namespace ris
