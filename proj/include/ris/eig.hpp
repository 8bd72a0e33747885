// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ris/mat.hpp"
#include "ris/tolerances.hpp"

namespace ris {

// Hermitian eigendecomposition A = V diag(w) V^*, eigenvalues ascending,
// V unitary. Cyclic complex Jacobi; robust and exact-orthogonal at the
// dimensions this library handles.
struct HermEig {
  std::vector<double> eigenvalues;
  Mat vectors;  // columns
};
HermEig eig_hermitian(const Mat& a, const Tolerances& tol = Tolerances::defaults());

// Eigendecomposition of a general (nonnormal) complex matrix:
//   M = sum_j e_j r_j l_j  with l_i r_j = delta_ij.
// Right vectors are columns of `right`, left vectors are the matching rows
// of `left` = right^-1, so biorthogonality is exact by construction.
// Hessenberg reduction followed by shifted QR; throws ConvergenceFailure if
// the sweep budget (30 * dim) is exhausted.
struct SpectralDecomposition {
  std::vector<cx> eigenvalues;
  Mat right;  // n x n, column j is r_j
  Mat left;   // n x n, row j is l_j
  // cluster_map[j] = cluster index of eigenvalue j; numerically coincident
  // eigenvalues (relative tolerance eig_cluster_rel) share a cluster.
  std::vector<int> cluster_map;
  int cluster_count = 0;
  // Frobenius residual |M - sum e_j r_j l_j| (diagnostic; small for
  // diagonalizable input, large signals a near-defective matrix).
  double residual = 0.0;

  // Spectral projector of one cluster: sum over members of r_j l_j.
  Mat cluster_projector(int cluster) const;
};
SpectralDecomposition eig_general(const Mat& m, const Tolerances& tol = Tolerances::defaults());

// Complex Schur form M = Q T Q^* with T upper triangular (used by
// eig_general; exposed for tests).
struct SchurForm {
  Mat t;
  Mat q;
};
SchurForm schur(const Mat& m, const Tolerances& tol = Tolerances::defaults());

// LU-based dense solves.
Mat inverse(const Mat& a);
Mat solve(const Mat& a, const Mat& b);  // a x = b

}  // namespace ris
