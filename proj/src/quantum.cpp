// SPDX-License-Identifier: Apache-2.0
#include "ris/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris {

Hamiltonian::Hamiltonian(Mat op, const Tolerances& tol) : op_(std::move(op)) {
  if (!op_.square()) throw DimensionMismatch("Hamiltonian: matrix not square");
  if (op_.hermiticity_defect() > tol.hermiticity * std::max(1.0, op_.max_abs()))
    throw NonHermitianInput("Hamiltonian: input not Hermitian within tolerance");
}

DensityMatrix::DensityMatrix(Mat op, const Tolerances& tol) : op_(std::move(op)) {
  if (!op_.square()) throw DimensionMismatch("DensityMatrix: matrix not square");
  if (op_.hermiticity_defect() > tol.hermiticity * std::max(1.0, op_.max_abs()))
    throw NonHermitianInput("DensityMatrix: not Hermitian within tolerance");
  const cx tr = op_.trace();
  if (std::abs(tr - cx{1.0, 0.0}) > 1e3 * tol.trace_one)
    throw Error("DensityMatrix: trace deviates from one by " + std::to_string(std::abs(tr - cx{1.0, 0.0})));
  const HermEig eg = eig_hermitian(op_, tol);
  floor_ = eg.eigenvalues.front();
  if (floor_ < -tol.psd_floor)
    throw Error("DensityMatrix: negative eigenvalue " + std::to_string(floor_));
}

DensityMatrix gibbs_state(const Hamiltonian& h, double beta, const Tolerances& tol) {
  if (!std::isfinite(beta)) throw Error("gibbs_state: beta must be finite");
  const HermEig eg = eig_hermitian(h.op(), tol);
  const int n = h.dim();
  const double wmin = *std::min_element(eg.eigenvalues.begin(), eg.eigenvalues.end());
  std::vector<double> w(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    w[std::size_t(i)] = std::exp(-beta * (eg.eigenvalues[std::size_t(i)] - wmin));
    z += w[std::size_t(i)];
  }
  Mat scaled = eg.vectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scaled(i, j) *= w[std::size_t(j)] / z;
  Mat rho = scaled * eg.vectors.adjoint();
  return DensityMatrix(hermitian_part(rho), tol);
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  const HermEig eg = eig_hermitian(rho.op(), tol);
  double s = 0.0;
  for (double mu : eg.eigenvalues) {
    if (mu > 0.0) s -= mu * std::log(mu);
  }
  return s;
}

double relative_entropy(const DensityMatrix& eta, const DensityMatrix& nu, const Tolerances& tol) {
  if (eta.dim() != nu.dim()) throw DimensionMismatch("relative_entropy: dimension mismatch");
  if (!eta.faithful(tol))
    throw NonFaithfulState("relative_entropy: first argument not faithful", eta.faithful_floor());
  if (!nu.faithful(tol))
    throw NonFaithfulState("relative_entropy: second argument not faithful", nu.faithful_floor());

  const HermEig ee = eig_hermitian(eta.op(), tol);
  // Tr(eta log eta)
  double a = 0.0;
  for (double mu : ee.eigenvalues) a += mu * std::log(mu);
  // Tr(eta log nu); eta is Hermitian, so this is the HS pairing with log nu
  const Mat log_nu = herm_func(nu.op(), [](double w) { return cx{std::log(w), 0.0}; }, tol);
  const double b = hs_inner(eta.op(), log_nu).real();
  return a - b;
}

DensityMatrix maximally_mixed(int dim) {
  Mat m = Mat::identity(dim);
  m *= cx{1.0 / dim, 0.0};
  return DensityMatrix(std::move(m));
}

DensityMatrix random_density(int dim, std::mt19937_64& rng, double floor) {
  Mat g = random_matrix(dim, rng);
  Mat w = g * g.adjoint();
  w *= cx{1.0 / w.trace().real(), 0.0};
  const double mix = floor * dim;
  Mat rho = hermitian_part(w) * cx{1.0 - mix, 0.0} + Mat::identity(dim) * cx{floor, 0.0};
  return DensityMatrix(std::move(rho));
}

}  // namespace ris
