// SPDX-License-Identifier: Apache-2.0
#include "ris/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ris/errors.hpp"

namespace ris {

namespace {

// Match peripheral clusters of `cs` to the branch order of the previous
// point by nearest eigenvalue. Returns permuted (eigs, projectors).
void match_branches(const ChannelSpectrum& cs, const std::vector<cx>& prev_eigs,
                    std::vector<cx>& eigs, std::vector<Mat>& proj) {
  const int z = int(cs.peripheral_indices.size());
  std::vector<int> taken(std::size_t(z), 0);
  eigs.resize(std::size_t(z));
  proj.resize(std::size_t(z));
  for (int j = 0; j < z; ++j) {
    int best = -1;
    double best_d = 0.0;
    for (int c = 0; c < z; ++c) {
      if (taken[std::size_t(c)]) continue;
      const double d =
          std::abs(cs.cluster_values[std::size_t(cs.peripheral_indices[std::size_t(c)])] -
                   prev_eigs[std::size_t(j)]);
      if (best < 0 || d < best_d) {
        best = c;
        best_d = d;
      }
    }
    taken[std::size_t(best)] = 1;
    eigs[std::size_t(j)] = cs.cluster_values[std::size_t(cs.peripheral_indices[std::size_t(best)])];
    proj[std::size_t(j)] = cs.projectors[std::size_t(cs.peripheral_indices[std::size_t(best)])];
  }
}

}  // namespace

ProjectorPath build_projector_path(const std::function<Superoperator(double)>& channel_at,
                                   int t_steps, const Tolerances& tol) {
  if (t_steps < 1) throw Error("build_projector_path: T must be positive");
  ProjectorPath path;
  path.t_steps = t_steps;
  path.points.resize(std::size_t(t_steps) + 1);
  path.d_sys = channel_at(0.0).d_sys;

  for (int k = 0; k <= t_steps; ++k) {
    const Superoperator l = channel_at(double(k) / t_steps);
    const ChannelSpectrum cs = spectral(l, tol.peripheral_band, tol);
    if (cs.near_degenerate_boundary)
      throw Error("build_projector_path: near-degenerate peripheral boundary at k = " +
                  std::to_string(k) + " (spr of contracting part " + std::to_string(cs.ell_spr) + ")");
    ProjectorPath::Point& pt = path.points[std::size_t(k)];
    if (k == 0) {
      path.z = cs.z;
      // seed branch order by phase
      std::vector<int> order(cs.peripheral_indices.begin(), cs.peripheral_indices.end());
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::arg(cs.cluster_values[std::size_t(a)]) < std::arg(cs.cluster_values[std::size_t(b)]);
      });
      for (int c : order) {
        pt.eigs.push_back(cs.cluster_values[std::size_t(c)]);
        pt.proj.push_back(cs.projectors[std::size_t(c)]);
      }
    } else {
      if (cs.z != path.z)
        throw Error("build_projector_path: peripheral group order changed along the path");
      match_branches(cs, path.points[std::size_t(k - 1)].eigs, pt.eigs, pt.proj);
    }
    pt.peripheral = cs.peripheral_projector;
    pt.contracting = cs.contracting_projector;
    pt.ell_spr = cs.ell_spr;
    pt.ell_norm = cs.ell_norm;
    path.max_ell_norm = std::max(path.max_ell_norm, cs.ell_norm);
  }

  // Measured first and second divided differences along the path, in the
  // induced trace norm.
  const double t = double(t_steps);
  NormOptions fast;
  fast.restarts = 8;
  for (int k = 1; k <= t_steps; ++k) {
    for (int j = 0; j < path.z; ++j) {
      Mat dp = path.points[std::size_t(k)].proj[std::size_t(j)] -
               path.points[std::size_t(k - 1)].proj[std::size_t(j)];
      path.c_p_estimate =
          std::max(path.c_p_estimate, t * induced_trace_norm(dp, path.d_sys, fast).lower);
      path.c_p_estimate =
          std::max(path.c_p_estimate, t * std::abs(path.points[std::size_t(k)].eigs[std::size_t(j)] -
                                                   path.points[std::size_t(k - 1)].eigs[std::size_t(j)]));
      if (k < t_steps) {
        Mat ddp = path.points[std::size_t(k + 1)].proj[std::size_t(j)] -
                  path.points[std::size_t(k)].proj[std::size_t(j)] * cx{2.0, 0.0} +
                  path.points[std::size_t(k - 1)].proj[std::size_t(j)];
        path.c_p_estimate =
            std::max(path.c_p_estimate, t * t * induced_trace_norm(ddp, path.d_sys, fast).lower);
        const cx dde = path.points[std::size_t(k + 1)].eigs[std::size_t(j)] -
                       2.0 * path.points[std::size_t(k)].eigs[std::size_t(j)] +
                       path.points[std::size_t(k - 1)].eigs[std::size_t(j)];
        path.c_p_estimate = std::max(path.c_p_estimate, t * t * std::abs(dde));
      }
    }
  }
  return path;
}

Mat inv_sqrt_id_minus(const Mat& y, double series_threshold) {
  const int n = y.rows();
  const double ynorm = operator_norm(y);
  if (ynorm < series_threshold) {
    // (1 - x)^(-1/2) = sum c_n x^n, c_0 = 1, c_n = c_{n-1} (2n-1)/(2n)
    Mat acc = Mat::identity(n);
    Mat term = Mat::identity(n);
    double coef = 1.0;
    for (int k = 1; k < 200; ++k) {
      term = term * y;
      coef *= (2.0 * k - 1.0) / (2.0 * k);
      const Mat contrib = term * cx{coef, 0.0};
      acc += contrib;
      if (contrib.frob_norm() <= 1e-14 * acc.frob_norm()) break;
    }
    return acc;
  }
  // Spectral route for larger steps.
  const Mat a = Mat::identity(n) - y;
  const SpectralDecomposition sd = eig_general(a);
  Mat scaled = sd.right;
  for (int j = 0; j < n; ++j) {
    const cx f = cx{1.0, 0.0} / std::sqrt(sd.eigenvalues[std::size_t(j)]);
    for (int i = 0; i < n; ++i) scaled(i, j) *= f;
  }
  return scaled * sd.left;
}

KatoStep kato_step(const std::vector<Mat>& proj_prev, const std::vector<Mat>& proj_next) {
  if (proj_prev.size() != proj_next.size() || proj_prev.empty())
    throw DimensionMismatch("kato_step: branch count mismatch");
  const int n = proj_prev.front().rows();
  KatoStep out{Mat(n, n), Mat(n, n)};
  for (std::size_t j = 0; j < proj_prev.size(); ++j) {
    const Mat dp = proj_next[j] - proj_prev[j];
    const double dn = operator_norm(dp);
    if (dn >= 1.0 - 1e-9)
      throw StepTooLarge("kato_step: projector increment has norm " + std::to_string(dn));
    const Mat f = inv_sqrt_id_minus(dp * dp);
    out.kappa += proj_next[j] * proj_prev[j] * f;
    out.kappa_dagger += proj_prev[j] * proj_next[j] * f;
  }
  return out;
}

AdiabaticPropagator build_propagator(const ProjectorPath& path) {
  const int t = path.t_steps;
  const int z = path.z;
  const int n = path.points.front().peripheral.rows();
  AdiabaticPropagator prop;
  prop.k_op.resize(std::size_t(t) + 1);
  prop.k_dagger.resize(std::size_t(t) + 1);
  prop.phase.resize(std::size_t(t) + 1);
  prop.phase_dagger.resize(std::size_t(t) + 1);
  prop.a_op.resize(std::size_t(t) + 1);
  prop.a_dagger.resize(std::size_t(t) + 1);

  prop.k_op[0] = Mat::identity(n);
  prop.k_dagger[0] = Mat::identity(n);
  prop.phase[0] = path.points.front().peripheral;
  prop.phase_dagger[0] = path.points.front().peripheral;
  prop.a_op[0] = path.points.front().peripheral;
  prop.a_dagger[0] = path.points.front().peripheral;

  std::vector<cx> running_phase(std::size_t(z), cx{1.0, 0.0});
  for (int k = 1; k <= t; ++k) {
    const KatoStep ks =
        kato_step(path.points[std::size_t(k - 1)].proj, path.points[std::size_t(k)].proj);
    prop.k_op[std::size_t(k)] = ks.kappa * prop.k_op[std::size_t(k - 1)];
    prop.k_dagger[std::size_t(k)] = prop.k_dagger[std::size_t(k - 1)] * ks.kappa_dagger;

    Mat phi(n, n), phid(n, n);
    for (int j = 0; j < z; ++j) {
      running_phase[std::size_t(j)] *= path.points[std::size_t(k)].eigs[std::size_t(j)];
      phi += path.points[0].proj[std::size_t(j)] * running_phase[std::size_t(j)];
      phid += path.points[0].proj[std::size_t(j)] * std::conj(running_phase[std::size_t(j)]);
    }
    prop.phase[std::size_t(k)] = phi;
    prop.phase_dagger[std::size_t(k)] = phid;
    prop.a_op[std::size_t(k)] = prop.k_op[std::size_t(k)] * phi;
    prop.a_dagger[std::size_t(k)] = phid * prop.k_dagger[std::size_t(k)];
    NormOptions fast;
    fast.restarts = 8;
    prop.max_k_norm =
        std::max(prop.max_k_norm, induced_trace_norm(prop.k_op[std::size_t(k)], path.d_sys, fast).lower);
    prop.max_a_norm =
        std::max(prop.max_a_norm, induced_trace_norm(prop.a_op[std::size_t(k)], path.d_sys, fast).lower);
  }
  const double cp = path.c_p_estimate;
  const double ratio = cp / double(t);
  prop.k_norm_bound =
      ratio < 1.0 ? double(z) * std::pow(1.0 - ratio * ratio, -0.5 * t)
                  : std::numeric_limits<double>::infinity();
  return prop;
}

AdiabaticErrorReport adiabatic_error(const std::vector<Superoperator>& channels,
                                     const ProjectorPath& path, const AdiabaticPropagator& prop,
                                     const NormOptions& opt) {
  const int t = path.t_steps;
  if (int(channels.size()) != t)
    throw DimensionMismatch("adiabatic_error: need exactly T channels");
  const int d = channels.front().d_sys;
  const int n = d * d;

  AdiabaticErrorReport rep;
  Mat full = Mat::identity(n);
  Mat qchain = path.points.front().contracting;  // L^Q_k ... L^Q_1 Q_0
  Mat pchain = path.points.front().peripheral;   // L^P_k ... L^P_1 P_0
  for (int k = 1; k <= t; ++k) {
    const Mat& lmat = channels[std::size_t(k - 1)].mat;
    full = lmat * full;
    qchain = lmat * path.points[std::size_t(k)].contracting * qchain;
    pchain = lmat * path.points[std::size_t(k)].peripheral * pchain;

    Mat e1 = full - prop.a_op[std::size_t(k)] - qchain;
    Mat e2 = (full - pchain) * path.points.front().peripheral;
    const InducedNorm n1 = induced_trace_norm(e1, d, opt);
    const InducedNorm n2 = induced_trace_norm(e2, d, opt);
    const InducedNorm nq = induced_trace_norm(qchain, d, opt);
    rep.e1_lower.push_back(n1.lower);
    rep.e1_upper.push_back(induced_norm_upper_proxy(e1, d));
    rep.e2_lower.push_back(n2.lower);
    rep.e2_upper.push_back(induced_norm_upper_proxy(e2, d));
    rep.q_chain_lower.push_back(nq.lower);
    rep.q_chain_upper.push_back(induced_norm_upper_proxy(qchain, d));
    rep.max_e1_lower = std::max(rep.max_e1_lower, n1.lower);
    rep.max_e2_lower = std::max(rep.max_e2_lower, n2.lower);
  }
  return rep;
}

}  // namespace ris
