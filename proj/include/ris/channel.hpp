// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ris/quantum.hpp"

namespace ris {

// Linear map on system operators, stored as a d^2 x d^2 matrix acting on
// column-stacked operators: apply(S, X) = unvec(S.mat vec(X)).
struct Superoperator {
  int d_sys = 0;
  Mat mat;
  bool cptp_verified = false;

  Mat apply(const Mat& x) const;
  Superoperator compose(const Superoperator& other) const;  // this after other
  Superoperator adjoint() const;  // Hilbert-Schmidt adjoint
  static Superoperator identity(int d);
  // X -> A X B
  static Superoperator sandwich(const Mat& a, const Mat& b);
  // Assemble from the action on matrix units.
  static Superoperator from_map(int d, const std::function<Mat(const Mat&)>& f);
};

// exp(-i tau (h_S (x) Id + Id (x) h_E + lambda v)).
Mat step_unitary(const Hamiltonian& h_s, const Hamiltonian& h_e, const Hamiltonian& v,
                 double lambda, double tau, const Tolerances& tol = Tolerances::defaults());

struct CptpReport {
  double min_choi_eigenvalue = 0.0;
  double tp_residual = 0.0;    // |S*(Id) - Id|_F
  double herm_residual = 0.0;  // max |S(X*) - S(X)*| over matrix units
  bool completely_positive = false;
  bool trace_preserving = false;
  bool ok() const { return completely_positive && trace_preserving; }
};

Mat choi(const Superoperator& s);
CptpReport verify_cptp(const Superoperator& s, const Tolerances& tol = Tolerances::defaults());

// rho -> Tr_E(U (rho (x) xi) U*). Verifies the CPTP structure and throws
// CptpViolation if it fails (numerical breakdown, not physics).
Superoperator reduced_dynamics(const Hamiltonian& h_s, const Hamiltonian& h_e,
                               const Hamiltonian& v, double lambda, double tau,
                               const DensityMatrix& xi,
                               const Tolerances& tol = Tolerances::defaults());

// Certified lower bound on the induced trace norm sup |S(x)|_1 / |x|_1,
// obtained by alternating ascent over rank-one inputs |u><v| (the extreme
// points of the trace-norm ball) from seeded random restarts.
struct NormOptions {
  int restarts = 32;
  int max_iter = 300;
  double rel_tol = 1e-13;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};
struct InducedNorm {
  double lower = 0.0;
  bool converged = false;
};
InducedNorm induced_trace_norm(const Mat& smat, int d, const NormOptions& opt = {});
InducedNorm induced_trace_norm(const Superoperator& s, const NormOptions& opt = {});
// Upper proxy sqrt(d) |smat|_F >= induced trace norm.
double induced_norm_upper_proxy(const Mat& smat, int d);

// Spectral data of one superoperator.
struct ChannelSpectrum {
  int d_sys = 0;
  std::vector<cx> eigs;            // descending modulus
  std::vector<int> cluster_of;     // eigenvalue -> cluster
  std::vector<Mat> projectors;     // one per cluster (right (x) left dyads)
  std::vector<cx> cluster_values;  // representative eigenvalue per cluster
  std::vector<int> peripheral_indices;  // cluster indices with |e| ~ 1
  int z = 0;                       // number of distinct peripheral eigenvalues
  double gap = 0.0;                // min distance between distinct peripheral eigenvalues
  Mat peripheral_projector;        // P
  Mat contracting_projector;       // Q = Id - P
  double ell_spr = 0.0;            // spectral radius of L Q
  double ell_norm = 0.0;           // induced-trace-norm lower bound for L Q
  bool ell_norm_converged = false;
  // True when some non-peripheral modulus crowds the peripheral band; the
  // adiabatic path builder refuses such channels.
  bool near_degenerate_boundary = false;
};

ChannelSpectrum spectral(const Superoperator& s, double peripheral_tol = 1e-9,
                         const Tolerances& tol = Tolerances::defaults());

// Randomized residue cross-check: at `points` random locations z outside the
// spectrum, compares the resolvent (z - L)^-1 against the partial-fraction
// sum of the cluster projectors. Returns the max Frobenius deviation.
double spectral_residue_check(const ChannelSpectrum& cs, const Superoperator& s,
                              int points = 3, std::uint64_t seed = 12345);

Superoperator power(const Superoperator& s, long m);

// Smallest m <= m_cap with gcd(m, z) = 1 such that
//   max over the grid of  |L(s)^m Q(s)|_(1->1)  <=  1 - G.
// Candidates with spr(LQ)^m > 1 - G are skipped on the spectral-radius
// certificate alone. Throws NoSuchM past m_cap.
struct RepetitionSearch {
  long m = 0;
  double worst_norm = 0.0;
  int z = 1;
};
RepetitionSearch find_m(const std::function<Superoperator(double)>& channel_at, double big_g,
                        const std::vector<double>& s_grid, long m_cap = 100000,
                        const NormOptions& opt = {},
                        const Tolerances& tol = Tolerances::defaults());

struct IrreducibilityReport {
  bool irreducible = false;
  int eigenvalue_one_multiplicity = 0;
  double fixed_point_floor = 0.0;
};
IrreducibilityReport irreducibility(const Superoperator& s,
                                    const Tolerances& tol = Tolerances::defaults());

// The unique fixed point normalized to a state. Throws ReducibleChannel when
// eigenvalue 1 is degenerate or the fixed point is singular.
DensityMatrix invariant_state(const Superoperator& s,
                              const Tolerances& tol = Tolerances::defaults());

}  // namespace ris
