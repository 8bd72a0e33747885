// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ris/errors.hpp"
#include "ris/quantum.hpp"

using namespace ris;

TEST_CASE("gibbs states") {
  std::mt19937_64 rng(21);
  // beta = 0 is the maximally mixed state
  const Hamiltonian h(Mat::diag({cx{0.0}, cx{0.8}}));
  CHECK((gibbs_state(h, 0.0).op() - maximally_mixed(2).op()).max_abs() < 1e-14);

  // two-level closed form
  const double beta = 1.3, e0 = 0.8;
  const DensityMatrix xi = gibbs_state(h, beta);
  const double z = 1.0 + std::exp(-beta * e0);
  CHECK(std::abs(xi.op()(0, 0) - cx{1.0 / z}) < 1e-14);
  CHECK(std::abs(xi.op()(1, 1) - cx{std::exp(-beta * e0) / z}) < 1e-14);

  for (int rep = 0; rep < 5; ++rep) {
    const Hamiltonian hr(random_hermitian(4, rng));
    const DensityMatrix g = gibbs_state(hr, 0.7);
    CHECK(g.faithful());
    const Mat comm = g.op() * hr.op() - hr.op() * g.op();
    CHECK(comm.frob_norm() < 1e-12);
  }
}

TEST_CASE("von Neumann entropy") {
  // pure state
  Mat pure(2, 2);
  pure(0, 0) = 1.0;
  CHECK(von_neumann_entropy(DensityMatrix(pure)) == doctest::Approx(0.0).epsilon(1e-14));
  // maximally mixed
  CHECK(von_neumann_entropy(maximally_mixed(5)) == doctest::Approx(std::log(5.0)).epsilon(1e-13));
  // binary entropy closed form
  for (double p : {0.1, 0.35, 0.62}) {
    const DensityMatrix rho(Mat::diag({cx{p}, cx{1.0 - p}}));
    CHECK(von_neumann_entropy(rho) == doctest::Approx(oracles::binary_entropy(p)).epsilon(1e-13));
  }
  // unitary invariance
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix rho = random_density(4, rng);
    const Mat u = herm_propagator(random_hermitian(4, rng), 0.8);
    const DensityMatrix rotated(hermitian_part(u * rho.op() * u.adjoint()));
    CHECK(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(rotated)) < 1e-10);
  }
}

TEST_CASE("relative entropy") {
  const DensityMatrix uniform = maximally_mixed(2);
  CHECK(relative_entropy(uniform, uniform) == doctest::Approx(0.0).epsilon(1e-14));

  // eta = I/2 + diag(eps, -eps) against I/2: 2 eps^2 + O(eps^4)
  const double eps = 1e-3;
  const DensityMatrix eta(Mat::diag({cx{0.5 + eps}, cx{0.5 - eps}}));
  CHECK(std::abs(relative_entropy(eta, uniform) - 2.0 * eps * eps) < 1e-9);
  CHECK(relative_entropy(eta, uniform) ==
        doctest::Approx(oracles::binary_kl(0.5 + eps, 0.5)).epsilon(1e-12));

  // Pinsker-type lower bound on random faithful pairs
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 40; ++rep) {
    const int d = 2 + (rep % 3);
    const DensityMatrix x = random_density(d, rng, 0.03);
    const DensityMatrix y = random_density(d, rng, 0.03);
    const double lhs = relative_entropy(x, y);
    CHECK(lhs >= 0.5 * std::pow(trace_norm(x.op() - y.op()), 2) - 1e-9);
    CHECK(lhs >= -1e-12);
  }

  // non-faithful arguments are rejected, no silent regularization
  Mat pure(2, 2);
  pure(0, 0) = 1.0;
  CHECK_THROWS_AS(relative_entropy(DensityMatrix(pure), uniform), NonFaithfulState);
  CHECK_THROWS_AS(relative_entropy(uniform, DensityMatrix(pure)), NonFaithfulState);
}

TEST_CASE("density matrix validation") {
  std::mt19937_64 rng(24);
  CHECK_THROWS_AS(DensityMatrix(random_matrix(3, rng)), Error);
  CHECK_THROWS_AS(DensityMatrix(Mat::identity(2)), Error);
  CHECK_THROWS_AS(DensityMatrix(Mat::diag({cx{1.5}, cx{-0.5}})), Error);
  // gibbs eigenvalues strictly positive at finite beta
  for (double beta : {0.5, 2.0, 5.0}) {
    const DensityMatrix g = gibbs_state(Hamiltonian(random_hermitian(4, rng)), beta);
    CHECK(g.faithful_floor() > 0.0);
    CHECK(g.faithful());
  }
}
