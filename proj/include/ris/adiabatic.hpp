// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "ris/channel.hpp"

namespace ris {

// Peripheral spectral data sampled along s = k/T, k = 0..T, with cluster
// labels matched by continuity so that index j means the same branch at
// every step.
struct ProjectorPath {
  int t_steps = 0;  // T
  int d_sys = 0;
  int z = 1;
  struct Point {
    std::vector<cx> eigs;      // peripheral eigenvalue per branch j
    std::vector<Mat> proj;     // P^j
    Mat peripheral;            // P
    Mat contracting;           // Q
    double ell_spr = 0.0;
    double ell_norm = 0.0;
  };
  std::vector<Point> points;  // size T + 1
  // Measured divided-difference bound: max over branches and steps of
  // T |dP|, T |de|, T^2 |ddP|, T^2 |dde| in the induced trace norm (the
  // norm in which peripheral projectors have norm one). Stands in for the
  // C^2 bound along the path.
  double c_p_estimate = 0.0;
  double max_ell_norm = 0.0;  // measured ell over the path
};

ProjectorPath build_projector_path(const std::function<Superoperator(double)>& channel_at,
                                   int t_steps, const Tolerances& tol = Tolerances::defaults());

// One intertwiner step kappa = sum_j P_next^j P_prev^j (Id - (dP^j)^2)^(-1/2)
// and its pseudo-adjoint. Throws StepTooLarge when |dP| >= 1.
struct KatoStep {
  Mat kappa;
  Mat kappa_dagger;
};
KatoStep kato_step(const std::vector<Mat>& proj_prev, const std::vector<Mat>& proj_next);

// (Id - y)^(-1/2) by binomial series for small |y|, spectral otherwise.
Mat inv_sqrt_id_minus(const Mat& y, double series_threshold = 0.09);

// Discrete adiabatic propagator A_k = K_k Phi_k along the path, with the
// pseudo-adjoint family. A_0 = P_0.
struct AdiabaticPropagator {
  std::vector<Mat> k_op, k_dagger;      // K_k and its pseudo-adjoint
  std::vector<Mat> phase, phase_dagger; // Phi_k built on P_0^j
  std::vector<Mat> a_op, a_dagger;      // A_k = K_k Phi_k
  double max_k_norm = 0.0;              // max induced norm of K_k (measured)
  double max_a_norm = 0.0;              // max induced norm of A_k (measured)
  double k_norm_bound = 0.0;            // N_max (1 - c_P^2/T^2)^(-T/2) from measured c_P
};
AdiabaticPropagator build_propagator(const ProjectorPath& path);

// Deviation of the true product from the adiabatic approximation:
//   e1(k) = |L_k...L_1 - A_k - L^Q_k...L^Q_1 Q_0|
//   e2(k) = |(L_k...L_1 - L^P_k...L^P_1) P_0|
// in the induced trace norm (certified lower bound) with a Frobenius-based
// upper proxy alongside. channels[k-1] must be the step-k map.
struct AdiabaticErrorReport {
  std::vector<double> e1_lower, e1_upper;
  std::vector<double> e2_lower, e2_upper;
  std::vector<double> q_chain_lower, q_chain_upper;
  double max_e1_lower = 0.0;
  double max_e2_lower = 0.0;
};
AdiabaticErrorReport adiabatic_error(const std::vector<Superoperator>& channels,
                                     const ProjectorPath& path, const AdiabaticPropagator& prop,
                                     const NormOptions& opt = {});

}  // namespace ris
