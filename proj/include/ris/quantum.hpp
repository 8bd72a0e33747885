// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ris/linalg.hpp"
#include "ris/mat.hpp"
#include "ris/tolerances.hpp"

namespace ris {

// Hermitian operator with energy units.
class Hamiltonian {
public:
  explicit Hamiltonian(Mat op, const Tolerances& tol = Tolerances::defaults());
  const Mat& op() const { return op_; }
  int dim() const { return op_.rows(); }

private:
  Mat op_;
};

// Validated density matrix: Hermitian, positive semidefinite, unit trace.
// The smallest eigenvalue is cached on construction; faithful() states admit
// logarithms.
class DensityMatrix {
public:
  explicit DensityMatrix(Mat op, const Tolerances& tol = Tolerances::defaults());
  const Mat& op() const { return op_; }
  int dim() const { return op_.rows(); }
  double faithful_floor() const { return floor_; }
  bool faithful(const Tolerances& tol = Tolerances::defaults()) const {
    return floor_ > tol.faithful_floor;
  }

private:
  Mat op_;
  double floor_;
};

// exp(-beta h) / Tr exp(-beta h). Faithful for finite beta; computed against
// the shifted spectrum so large beta stays finite.
DensityMatrix gibbs_state(const Hamiltonian& h, double beta,
                          const Tolerances& tol = Tolerances::defaults());

// -Tr(rho log rho), natural log, with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho,
                           const Tolerances& tol = Tolerances::defaults());

// Tr(eta (log eta - log nu)). Both states must be faithful; a NonFaithfulState
// error carries the offending eigenvalue. No clipping of the spectrum.
double relative_entropy(const DensityMatrix& eta, const DensityMatrix& nu,
                        const Tolerances& tol = Tolerances::defaults());

DensityMatrix maximally_mixed(int dim);

// Random faithful state: normalized G G* mixed with the identity so the
// smallest eigenvalue stays above `floor`.
DensityMatrix random_density(int dim, std::mt19937_64& rng, double floor = 0.05);

}  // namespace ris
