// SPDX-License-Identifier: Apache-2.0
#include "ris/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris {

EtaSpectral EtaSpectral::from_state(const DensityMatrix& eta, const Tolerances& tol) {
  if (!eta.faithful(tol))
    throw NonFaithfulState("EtaSpectral: state not faithful", eta.faithful_floor());
  const HermEig eg = eig_hermitian(eta.op(), tol);
  const int n = eta.dim();

  EtaSpectral out;
  out.dim = n;
  int start = 0;
  while (start < n) {
    int end = start + 1;
    double rep = eg.eigenvalues[std::size_t(start)];
    while (end < n &&
           std::abs(eg.eigenvalues[std::size_t(end)] - eg.eigenvalues[std::size_t(end - 1)]) <=
               tol.eig_cluster_rel * std::max(1.0, std::abs(rep))) {
      ++end;
    }
    double mu = 0.0;
    Mat p(n, n);
    for (int c = start; c < end; ++c) {
      mu += eg.eigenvalues[std::size_t(c)];
      for (int r = 0; r < n; ++r)
        for (int cc = 0; cc < n; ++cc)
          p(r, cc) += eg.vectors(r, c) * std::conj(eg.vectors(cc, c));
    }
    out.mu.push_back(mu / (end - start));
    out.p.push_back(hermitian_part(p));
    start = end;
  }
  out.inf_sp = out.mu.front();
  return out;
}

namespace {

void require_traceless(const Mat& a, const char* who) {
  const double t = std::abs(a.trace());
  if (t > 1e-10) throw NonTraceless(std::string(who) + ": argument is not traceless", t);
}

}  // namespace

cx f_eta(const EtaSpectral& eta, const Mat& a, const Mat& b) {
  require_traceless(a, "f_eta");
  require_traceless(b, "f_eta");
  const std::size_t nc = eta.mu.size();
  cx acc{};
  for (std::size_t i = 0; i < nc; ++i) {
    const Mat api = a * eta.p[i];
    const Mat bpi = b * eta.p[i];
    acc += (api * bpi).trace() / (2.0 * eta.mu[i]);
    for (std::size_t j = i + 1; j < nc; ++j) {
      const double w =
          (std::log(eta.mu[i]) - std::log(eta.mu[j])) / (eta.mu[i] - eta.mu[j]);
      acc += (a * eta.p[j] * b * eta.p[i]).trace() * w;
    }
  }
  return acc;
}

double f_eta_quadratic(const EtaSpectral& eta, const Mat& a) {
  return f_eta(eta, a, a).real();
}

ExpansionCheck entropy_expansion_check(const DensityMatrix& eta, const Mat& d1, const Mat& d2,
                                       const Tolerances& tol) {
  const EtaSpectral sp = EtaSpectral::from_state(eta, tol);
  const DensityMatrix s1(hermitian_part(eta.op() + d1), tol);
  const DensityMatrix s2(hermitian_part(eta.op() + d2), tol);
  ExpansionCheck out;
  out.exact = relative_entropy(s1, s2, tol);
  out.predicted = f_eta_quadratic(sp, d1 - d2);
  out.residual = std::abs(out.exact - out.predicted);
  out.d_scale = operator_norm(d1) + operator_norm(d2);
  return out;
}

Mat x_of_s(const Mat& u, const DensityMatrix& rho_inv, const DensityMatrix& xi) {
  const Mat w = kron(rho_inv.op(), xi.op());
  return u * w * u.adjoint() - w;
}

Mat first_order_m(const Hamiltonian& h_sys, const Hamiltonian& h_env, const Hamiltonian& v,
                  double tau, const Mat& rho_inv_0, const Mat& rho_inv_1, const DensityMatrix& xi,
                  const Tolerances& tol) {
  const int ds = h_sys.dim(), de = h_env.dim();
  const int n = ds * de;
  Mat h0 = kron(h_sys.op(), Mat::identity(de));
  h0 += kron(Mat::identity(ds), h_env.op());

  const Mat omega0 = kron(rho_inv_0, xi.op());
  {
    Mat comm = omega0 * h0 - h0 * omega0;
    if (comm.frob_norm() > 1e-10 * std::max(1.0, h0.frob_norm()))
      throw Error("first_order_m: [rho0 (x) xi, h0] != 0 (norm " +
                  std::to_string(comm.frob_norm()) + ")");
  }

  // Clustered levels of h0.
  const HermEig eg = eig_hermitian(h0, tol);
  std::vector<double> energy;
  std::vector<Mat> pi;
  int start = 0;
  const double scale = std::max(1.0, std::abs(eg.eigenvalues.back()));
  while (start < n) {
    int end = start + 1;
    while (end < n && std::abs(eg.eigenvalues[std::size_t(end)] -
                               eg.eigenvalues[std::size_t(end - 1)]) <= tol.eig_cluster_rel * scale)
      ++end;
    double e = 0.0;
    Mat p(n, n);
    for (int c = start; c < end; ++c) {
      e += eg.eigenvalues[std::size_t(c)];
      for (int r = 0; r < n; ++r)
        for (int cc = 0; cc < n; ++cc)
          p(r, cc) += eg.vectors(r, c) * std::conj(eg.vectors(cc, c));
    }
    energy.push_back(e / (end - start));
    pi.push_back(hermitian_part(p));
    start = end;
  }

  Mat s(n, n);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    s += pi[i] * v.op() * pi[i] * cx{0.0, -tau};
    for (std::size_t j = 0; j < pi.size(); ++j) {
      if (i == j) continue;
      const double de_ij = energy[i] - energy[j];
      if (std::abs(de_ij) < 1e-10)
        throw NearDegenerateLevels("first_order_m: distinct levels separated by " +
                                   std::to_string(de_ij));
      const cx w = (std::exp(cx{0.0, -tau * de_ij}) - 1.0) / de_ij;
      s += pi[i] * v.op() * pi[j] * w;
    }
  }

  const Mat u0 = herm_propagator(h0, tau, tol);
  const Mat omega1 = kron(rho_inv_1, xi.op());
  Mat m = u0 * omega1 * u0.adjoint() - omega1;
  m -= omega0 * s - s * omega0;
  return m;
}

InvariantExpansion invariant_state_expansion(const std::function<Superoperator(double)>& family,
                                             double h, const Tolerances& tol) {
  const Mat r_p1 = invariant_state(family(h), tol).op();
  const Mat r_m1 = invariant_state(family(-h), tol).op();
  const Mat r_p2 = invariant_state(family(2 * h), tol).op();
  const Mat r_m2 = invariant_state(family(-2 * h), tol).op();

  const Mat even1 = (r_p1 + r_m1) * cx{0.5, 0.0};
  const Mat even2 = (r_p2 + r_m2) * cx{0.5, 0.0};
  const Mat odd1 = (r_p1 - r_m1) * cx{0.5 / h, 0.0};
  const Mat odd2 = (r_p2 - r_m2) * cx{0.25 / h, 0.0};

  InvariantExpansion out;
  out.rho0 = (even1 * cx{4.0, 0.0} - even2) * cx{1.0 / 3.0, 0.0};
  out.rho1 = (odd1 * cx{4.0, 0.0} - odd2) * cx{1.0 / 3.0, 0.0};
  out.err0 = (out.rho0 - even1).frob_norm();
  out.err1 = (out.rho1 - odd1).frob_norm();
  return out;
}

KmsDualReport kms_dual_check(const Superoperator& l, const DensityMatrix& rho_inv, const Mat& u,
                             const DensityMatrix& xi, double tol_dev, const Tolerances& tol) {
  if (!rho_inv.faithful(tol))
    throw NonFaithfulState("kms_dual_check: invariant state not faithful", rho_inv.faithful_floor());
  const int d = l.d_sys;
  const Mat r_half = herm_func(rho_inv.op(), [](double w) { return cx{std::sqrt(w), 0.0}; }, tol);
  const Mat r_mhalf =
      herm_func(rho_inv.op(), [](double w) { return cx{1.0 / std::sqrt(w), 0.0}; }, tol);
  const Superoperator l_adj = l.adjoint();
  const Mat udag = u.adjoint();

  KmsDualReport rep;
  Mat unit(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      unit(i, j) = 1.0;
      const Mat lhs = r_half * l_adj.apply(r_mhalf * unit * r_mhalf) * r_half;
      const Mat rhs = partial_trace_env(udag * kron(unit, xi.op()) * u, d, xi.dim());
      unit(i, j) = 0.0;
      rep.relation_deviation = std::max(rep.relation_deviation, trace_norm(lhs - rhs));
    }
  rep.x_norm = trace_norm(x_of_s(u, rho_inv, xi));
  rep.max_deviation = std::max(rep.relation_deviation, rep.x_norm);
  rep.detailed_balance = rep.max_deviation <= tol_dev;
  return rep;
}

SmallCouplingPrediction sigma_small_coupling(const EtaSpectral& eta0, const Mat& m_op,
                                             const Mat& d_op, double lambda, double x_norm_1) {
  SmallCouplingPrediction out;
  const double fmm = f_eta(eta0, m_op, m_op).real();
  const double fdd = f_eta(eta0, d_op, d_op).real();
  const cx fdm = f_eta(eta0, d_op, m_op);
  const cx fmd = f_eta(eta0, m_op, d_op);
  out.predicted = lambda * lambda * fmm + fdd - lambda * (fdm + fmd).real();
  out.delta_threshold = eta0.inf_sp / 16.0;
  out.admissible = x_norm_1 <= out.delta_threshold;
  return out;
}

}  // namespace ris
