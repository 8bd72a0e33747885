// SPDX-License-Identifier: Apache-2.0
#include "ris/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ris/errors.hpp"

namespace ris {

Mat Superoperator::apply(const Mat& x) const {
  if (x.rows() != d_sys || x.cols() != d_sys)
    throw DimensionMismatch("Superoperator::apply: operand dimension mismatch");
  const std::vector<cx> vx = vec(x);
  Mat xv = Mat::col(vx);
  Mat yv = mat * xv;
  std::vector<cx> vy(vx.size());
  for (std::size_t i = 0; i < vy.size(); ++i) vy[i] = yv(int(i), 0);
  return unvec(vy, d_sys, d_sys);
}

Superoperator Superoperator::compose(const Superoperator& other) const {
  if (d_sys != other.d_sys) throw DimensionMismatch("Superoperator::compose: dimension mismatch");
  return {d_sys, mat * other.mat, false};
}

Superoperator Superoperator::adjoint() const { return {d_sys, mat.adjoint(), false}; }

Superoperator Superoperator::identity(int d) {
  return {d, Mat::identity(d * d), true};
}

Superoperator Superoperator::sandwich(const Mat& a, const Mat& b) {
  // vec(A X B) = kron(B^T, A) vec(X)
  return {a.rows(), kron(b.transpose(), a), false};
}

Superoperator Superoperator::from_map(int d, const std::function<Mat(const Mat&)>& f) {
  Superoperator s{d, Mat(d * d, d * d), false};
  Mat unit(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      unit(i, j) = 1.0;
      const std::vector<cx> col = vec(f(unit));
      unit(i, j) = 0.0;
      const int cidx = i + d * j;
      for (int r = 0; r < d * d; ++r) s.mat(r, cidx) = col[std::size_t(r)];
    }
  return s;
}

Mat step_unitary(const Hamiltonian& h_s, const Hamiltonian& h_e, const Hamiltonian& v,
                 double lambda, double tau, const Tolerances& tol) {
  const int ds = h_s.dim(), de = h_e.dim();
  if (v.dim() != ds * de)
    throw DimensionMismatch("step_unitary: interaction dimension mismatch");
  Mat h = kron(h_s.op(), Mat::identity(de));
  h += kron(Mat::identity(ds), h_e.op());
  h += v.op() * cx{lambda, 0.0};
  return herm_propagator(h, tau, tol);
}

Mat choi(const Superoperator& s) {
  const int d = s.d_sys;
  Mat c(d * d, d * d);
  Mat unit(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      unit(i, j) = 1.0;
      const Mat out = s.apply(unit);
      unit(i, j) = 0.0;
      // C = sum_ij E_ij (x) S(E_ij)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) c(i * d + k, j * d + l) = out(k, l);
    }
  return c;
}

CptpReport verify_cptp(const Superoperator& s, const Tolerances& tol) {
  CptpReport rep;
  const int d = s.d_sys;
  const Mat c = choi(s);
  const double scale = std::max(1.0, c.max_abs());
  Mat ch = hermitian_part(c);
  rep.herm_residual = (c - ch).max_abs();
  const HermEig eg = eig_hermitian(ch, tol);
  rep.min_choi_eigenvalue = eg.eigenvalues.front();
  rep.completely_positive = rep.min_choi_eigenvalue >= -tol.choi_psd && rep.herm_residual <= 1e-9 * scale;

  // Trace preservation: S*(Id) = Id.
  const Mat id = Mat::identity(d);
  Mat dual_id = Superoperator{d, s.mat.adjoint(), false}.apply(id);
  dual_id -= id;
  rep.tp_residual = dual_id.frob_norm();
  rep.trace_preserving = rep.tp_residual <= tol.trace_preserving * d;
  return rep;
}

Superoperator reduced_dynamics(const Hamiltonian& h_s, const Hamiltonian& h_e,
                               const Hamiltonian& v, double lambda, double tau,
                               const DensityMatrix& xi, const Tolerances& tol) {
  const int ds = h_s.dim(), de = h_e.dim();
  if (xi.dim() != de) throw DimensionMismatch("reduced_dynamics: probe state dimension mismatch");
  const Mat u = step_unitary(h_s, h_e, v, lambda, tau, tol);
  const Mat udag = u.adjoint();
  Superoperator s = Superoperator::from_map(ds, [&](const Mat& x) {
    return partial_trace_env(u * kron(x, xi.op()) * udag, ds, de);
  });
  const CptpReport rep = verify_cptp(s, tol);
  if (!rep.ok())
    throw CptpViolation("reduced_dynamics: CPTP verification failed (min Choi eig " +
                        std::to_string(rep.min_choi_eigenvalue) + ", TP residual " +
                        std::to_string(rep.tp_residual) + ")");
  s.cptp_verified = true;
  return s;
}

namespace {

// W = U V* from the compact SVD: the trace-norm subgradient at Y.
Mat polar_factor(const Mat& y) {
  const Svd s = svd(y);
  return s.u * s.v.adjoint();
}

struct AscentResult {
  double value = 0.0;
  bool converged = false;
};

AscentResult ascend_once(const Mat& smat, int d, Mat u, Mat v, int max_iter, double rel_tol) {
  AscentResult res;
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    // Y = S(u v*)
    Mat x(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x(i, j) = u(i, 0) * std::conj(v(j, 0));
    Mat xv = Mat::col(vec(x));
    Mat yv = smat * xv;
    std::vector<cx> vy(std::size_t(d) * d);
    for (std::size_t i = 0; i < vy.size(); ++i) vy[i] = yv(int(i), 0);
    const Mat y = unvec(vy, d, d);
    double val = 0.0;
    for (double sg : singular_values(y)) val += sg;
    res.value = std::max(res.value, val);
    if (val <= prev * (1.0 + rel_tol) && it > 0) {
      res.converged = true;
      break;
    }
    prev = val;

    // G_ij = Tr(W* S(E_ij)) = conj((S* vec W)_{i + dj})
    const Mat w = polar_factor(y);
    Mat wv = Mat::col(vec(w));
    Mat gv = smat.adjoint() * wv;
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = std::conj(gv(i + d * j, 0));
    // maximize |u^T G conj(v)|: top singular pair of G
    const Svd gs = svd(g);
    if (gs.sigma.empty()) break;
    for (int i = 0; i < d; ++i) {
      u(i, 0) = std::conj(gs.u(i, 0));
      v(i, 0) = std::conj(gs.v(i, 0));
    }
  }
  return res;
}

}  // namespace

InducedNorm induced_trace_norm(const Mat& smat, int d, const NormOptions& opt) {
  InducedNorm out;
  std::mt19937_64 rng(opt.seed);
  // Deterministic first start: the top right-singular vector of the matrix
  // representation, compressed to its dominant rank-one part.
  {
    const Svd s0 = svd(smat);
    if (!s0.sigma.empty()) {
      std::vector<cx> xv(std::size_t(d) * d);
      for (int i = 0; i < d * d; ++i) xv[std::size_t(i)] = s0.v(i, 0);
      const Svd xs = svd(unvec(xv, d, d));
      if (!xs.sigma.empty()) {
        Mat u(d, 1), v(d, 1);
        for (int i = 0; i < d; ++i) {
          u(i, 0) = xs.u(i, 0);
          v(i, 0) = xs.v(i, 0);
        }
        const AscentResult r = ascend_once(smat, d, u, v, opt.max_iter, opt.rel_tol);
        if (r.value > out.lower) {
          out.lower = r.value;
          out.converged = r.converged;
        }
      }
    }
  }
  for (int restart = 0; restart < opt.restarts; ++restart) {
    Mat u = random_unit_vector(d, rng);
    Mat v = random_unit_vector(d, rng);
    const AscentResult r = ascend_once(smat, d, u, v, opt.max_iter, opt.rel_tol);
    if (r.value > out.lower + 1e-15) {
      out.lower = r.value;
      out.converged = r.converged;
    }
  }
  return out;
}

InducedNorm induced_trace_norm(const Superoperator& s, const NormOptions& opt) {
  return induced_trace_norm(s.mat, s.d_sys, opt);
}

double induced_norm_upper_proxy(const Mat& smat, int d) {
  return std::sqrt(double(d)) * smat.frob_norm();
}

ChannelSpectrum spectral(const Superoperator& s, double peripheral_tol, const Tolerances& tol) {
  ChannelSpectrum cs;
  cs.d_sys = s.d_sys;
  const int n = s.d_sys * s.d_sys;
  const SpectralDecomposition sd = eig_general(s.mat, tol);
  cs.eigs = sd.eigenvalues;
  cs.cluster_of = sd.cluster_map;

  cs.projectors.resize(std::size_t(sd.cluster_count));
  cs.cluster_values.assign(std::size_t(sd.cluster_count), cx{});
  std::vector<int> counts(std::size_t(sd.cluster_count), 0);
  for (int i = 0; i < n; ++i) {
    const int c = sd.cluster_map[std::size_t(i)];
    cs.cluster_values[std::size_t(c)] += sd.eigenvalues[std::size_t(i)];
    counts[std::size_t(c)]++;
  }
  for (int c = 0; c < sd.cluster_count; ++c) {
    cs.cluster_values[std::size_t(c)] /= double(counts[std::size_t(c)]);
    cs.projectors[std::size_t(c)] = sd.cluster_projector(c);
  }

  cs.peripheral_projector = Mat(n, n);
  double next_modulus = 0.0;
  for (int c = 0; c < sd.cluster_count; ++c) {
    const double mod = std::abs(cs.cluster_values[std::size_t(c)]);
    if (mod > 1.0 - peripheral_tol) {
      cs.peripheral_indices.push_back(c);
      cs.peripheral_projector += cs.projectors[std::size_t(c)];
      // A defective peripheral cluster shows up as a non-idempotent dyad sum.
      Mat idem = cs.projectors[std::size_t(c)] * cs.projectors[std::size_t(c)];
      idem -= cs.projectors[std::size_t(c)];
      if (idem.frob_norm() > 1e-8 * std::max(1.0, cs.projectors[std::size_t(c)].frob_norm()))
        throw ConvergenceFailure("spectral: peripheral cluster is not diagonalizable");
    } else {
      next_modulus = std::max(next_modulus, mod);
    }
  }
  cs.z = int(cs.peripheral_indices.size());
  cs.ell_spr = next_modulus;
  cs.near_degenerate_boundary = next_modulus > 1.0 - tol.peripheral_guard;

  cs.gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < cs.peripheral_indices.size(); ++a)
    for (std::size_t b = a + 1; b < cs.peripheral_indices.size(); ++b)
      cs.gap = std::min(cs.gap, std::abs(cs.cluster_values[std::size_t(cs.peripheral_indices[a])] -
                                         cs.cluster_values[std::size_t(cs.peripheral_indices[b])]));

  cs.contracting_projector = Mat::identity(n) - cs.peripheral_projector;
  const Mat lq = s.mat * cs.contracting_projector;
  const InducedNorm nrm = induced_trace_norm(lq, s.d_sys);
  cs.ell_norm = nrm.lower;
  cs.ell_norm_converged = nrm.converged;
  return cs;
}

double spectral_residue_check(const ChannelSpectrum& cs, const Superoperator& s, int points,
                              std::uint64_t seed) {
  const int n = s.d_sys * s.d_sys;
  double radius = 1.0;
  for (const cx& e : cs.eigs) radius = std::max(radius, std::abs(e));
  radius = 2.0 * radius + 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    const cx z = radius * std::exp(cx{0.0, angle(rng)});
    Mat zi = Mat::identity(n) * z - s.mat;
    Mat res = inverse(zi);
    for (std::size_t c = 0; c < cs.projectors.size(); ++c)
      res -= cs.projectors[c] * (cx{1.0, 0.0} / (z - cs.cluster_values[c]));
    worst = std::max(worst, res.frob_norm());
  }
  return worst;
}

Superoperator power(const Superoperator& s, long m) {
  if (m < 0) throw Error("power: negative exponent");
  Superoperator acc = Superoperator::identity(s.d_sys);
  acc.cptp_verified = s.cptp_verified;
  Superoperator base = s;
  long e = m;
  while (e > 0) {
    if (e & 1) acc = acc.compose(base);
    base = base.compose(base);
    e >>= 1;
  }
  acc.cptp_verified = s.cptp_verified;
  return acc;
}

RepetitionSearch find_m(const std::function<Superoperator(double)>& channel_at, double big_g,
                        const std::vector<double>& s_grid, long m_cap, const NormOptions& opt,
                        const Tolerances& tol) {
  if (!(big_g > 0.0 && big_g < 1.0)) throw Error("find_m: G must lie in (0,1)");
  if (s_grid.empty()) throw Error("find_m: empty grid");

  struct Point {
    Superoperator l;
    Mat q;
    Mat lm;  // running L^m
    double spr;
  };
  std::vector<Point> pts;
  int z = -1;
  double max_spr = 0.0;
  for (double sv : s_grid) {
    Superoperator l = channel_at(sv);
    ChannelSpectrum cs = spectral(l, tol.peripheral_band, tol);
    if (cs.ell_spr >= 1.0)
      throw Error("find_m: channel violates the weak contraction hypothesis at s = " +
                  std::to_string(sv));
    if (z == -1) z = cs.z;
    if (cs.z != z)
      throw Error("find_m: peripheral group order changes across the grid");
    max_spr = std::max(max_spr, cs.ell_spr);
    pts.push_back({l, cs.contracting_projector, l.mat, cs.ell_spr});
  }

  const double target = 1.0 - big_g;
  // Norm >= spectral radius, so m below this threshold cannot succeed.
  long m_min = 1;
  if (max_spr > 0.0 && max_spr < 1.0)
    m_min = std::max<long>(1, long(std::ceil(std::log(target) / std::log(max_spr))));

  for (long m = 1; m <= m_cap; ++m) {
    if (m > 1)
      for (Point& p : pts) p.lm = p.l.mat * p.lm;
    if (m < m_min) continue;
    if (z > 1 && std::gcd(m, long(z)) != 1) continue;
    bool ok = true;
    double worst = 0.0;
    for (Point& p : pts) {
      if (std::pow(p.spr, double(m)) > target) {
        ok = false;
        break;
      }
      const InducedNorm nrm = induced_trace_norm(p.lm * p.q, pts.front().l.d_sys, opt);
      worst = std::max(worst, nrm.lower);
      if (nrm.lower > target) {
        ok = false;
        break;
      }
    }
    if (ok) return {m, worst, z};
  }
  throw NoSuchM("find_m: no admissible repetition count up to " + std::to_string(m_cap));
}

IrreducibilityReport irreducibility(const Superoperator& s, const Tolerances& tol) {
  IrreducibilityReport rep;
  const SpectralDecomposition sd = eig_general(s.mat, tol);
  int ones = 0;
  int one_idx = -1;
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    if (std::abs(sd.eigenvalues[i] - cx{1.0, 0.0}) <= 1e-8) {
      ++ones;
      one_idx = int(i);
    }
  }
  rep.eigenvalue_one_multiplicity = ones;
  if (ones != 1) return rep;

  const int d = s.d_sys;
  std::vector<cx> fx(std::size_t(d) * d);
  for (int i = 0; i < d * d; ++i) fx[std::size_t(i)] = sd.right(i, one_idx);
  Mat fixed = hermitian_part(unvec(fx, d, d));
  const cx tr = fixed.trace();
  if (std::abs(tr) < 1e-12) return rep;
  fixed *= cx{1.0, 0.0} / tr;
  const HermEig eg = eig_hermitian(hermitian_part(fixed), tol);
  rep.fixed_point_floor = eg.eigenvalues.front();
  rep.irreducible = rep.fixed_point_floor > tol.faithful_floor;
  return rep;
}

DensityMatrix invariant_state(const Superoperator& s, const Tolerances& tol) {
  const IrreducibilityReport rep = irreducibility(s, tol);
  if (rep.eigenvalue_one_multiplicity != 1)
    throw ReducibleChannel("invariant_state: eigenvalue 1 has multiplicity " +
                           std::to_string(rep.eigenvalue_one_multiplicity));
  if (!rep.irreducible)
    throw ReducibleChannel("invariant_state: fixed point is singular (floor " +
                           std::to_string(rep.fixed_point_floor) + ")");
  const SpectralDecomposition sd = eig_general(s.mat, tol);
  const int d = s.d_sys;
  int one_idx = 0;
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i)
    if (std::abs(sd.eigenvalues[i] - cx{1.0, 0.0}) <= 1e-8) one_idx = int(i);
  std::vector<cx> fx(std::size_t(d) * d);
  for (int i = 0; i < d * d; ++i) fx[std::size_t(i)] = sd.right(i, one_idx);
  Mat fixed = hermitian_part(unvec(fx, d, d));
  fixed *= cx{1.0, 0.0} / fixed.trace();
  return DensityMatrix(std::move(fixed), tol);
}

}  // namespace ris
