// SPDX-License-Identifier: Apache-2.0
//
// Dense complex eigensolvers. Hermitian input goes through cyclic Jacobi;
// general (nonnormal) input goes through Householder Hessenberg reduction
// and implicitly shifted QR with Givens chasing, followed by triangular
// back-substitution for right eigenvectors. Left eigenvectors come from the
// inverse of the right-vector matrix, which makes biorthogonality exact and
// is well-conditioned at the dimensions handled here.
#include "ris/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ris/errors.hpp"

namespace ris {

namespace {

constexpr double kEps = 2.220446049250313e-16;

cx phase_of(cx z) {
  const double a = std::abs(z);
  return a == 0.0 ? cx{1.0, 0.0} : z / a;
}

}  // namespace

HermEig eig_hermitian(const Mat& a, const Tolerances& tol) {
  if (!a.square()) throw DimensionMismatch("eig_hermitian: matrix not square");
  if (a.hermiticity_defect() > tol.hermiticity * std::max(1.0, a.max_abs()))
    throw NonHermitianInput("eig_hermitian: input exceeds hermiticity tolerance");

  const int n = a.rows();
  Mat h = hermitian_part(a);  // symmetrize roundoff
  Mat v = Mat::identity(n);
  const double fro = std::max(h.frob_norm(), 1e-300);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += std::norm(h(p, q));
    return std::sqrt(2.0 * s);
  };

  const int max_sweeps = 60;
  int sweep = 0;
  while (off_norm() > 1e-14 * fro) {
    if (++sweep > max_sweeps)
      throw ConvergenceFailure("eig_hermitian: Jacobi sweep budget exhausted");
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = std::abs(h(p, q));
        if (apq <= 1e-300) continue;
        const cx u = phase_of(h(p, q));
        const double zeta = (h(q, q).real() - h(p, p).real()) / (2.0 * apq);
        double t;
        if (std::abs(zeta) > 1e8) {
          t = 1.0 / (2.0 * zeta);
        } else {
          t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // rows p, q of h
        for (int j = 0; j < n; ++j) {
          const cx hp = h(p, j), hq = h(q, j);
          h(p, j) = c * hp - s * u * hq;
          h(q, j) = s * std::conj(u) * hp + c * hq;
        }
        // columns p, q of h
        for (int i = 0; i < n; ++i) {
          const cx hp = h(i, p), hq = h(i, q);
          h(i, p) = c * hp - s * std::conj(u) * hq;
          h(i, q) = s * u * hp + c * hq;
        }
        // accumulate eigenvectors
        for (int i = 0; i < n; ++i) {
          const cx vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * std::conj(u) * vq;
          v(i, q) = s * u * vp + c * vq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
      }
    }
  }

  HermEig out;
  out.eigenvalues.resize(std::size_t(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < n; ++i) out.eigenvalues[std::size_t(i)] = h(i, i).real();
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return h(x, x).real() < h(y, y).real();
  });
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[std::size_t(j)]);
  return out;
}

namespace {

struct Givens {
  double c;  // real cosine
  cx s;
};

// G = [c, s; -conj(s), c] maps (f, g) to (r, 0).
Givens make_givens(cx f, cx g) {
  if (std::abs(g) == 0.0) return {1.0, cx{0.0, 0.0}};
  if (std::abs(f) == 0.0) return {0.0, std::conj(phase_of(g))};
  const double r = std::hypot(std::abs(f), std::abs(g));
  return {std::abs(f) / r, phase_of(f) * std::conj(g) / r};
}

void apply_left(Mat& m, const Givens& g, int i, int jlo) {
  const int n = m.cols();
  for (int j = jlo; j < n; ++j) {
    const cx a = m(i, j), b = m(i + 1, j);
    m(i, j) = g.c * a + g.s * b;
    m(i + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

void apply_right(Mat& m, const Givens& g, int j, int ihi) {
  for (int i = 0; i < ihi; ++i) {
    const cx a = m(i, j), b = m(i, j + 1);
    m(i, j) = g.c * a + std::conj(g.s) * b;
    m(i, j + 1) = -g.s * a + g.c * b;
  }
}

}  // namespace

SchurForm schur(const Mat& m_in, const Tolerances& tol) {
  if (!m_in.square()) throw DimensionMismatch("schur: matrix not square");
  const int n = m_in.rows();
  Mat h = m_in;
  Mat q = Mat::identity(n);
  const double scale = std::max(m_in.frob_norm(), 1e-300);

  // Householder reduction to upper Hessenberg, accumulating q.
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm <= kEps * scale) continue;
    const cx alpha = -phase_of(h(k + 1, k)) * xnorm;
    std::vector<cx> v(static_cast<std::size_t>(n), cx{});
    for (int i = k + 1; i < n; ++i) v[std::size_t(i)] = h(i, k);
    v[std::size_t(k + 1)] -= alpha;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[std::size_t(i)]);
    if (vnorm2 <= 1e-300) continue;
    const double beta = 2.0 / vnorm2;
    // h <- (I - beta v v*) h
    for (int j = k; j < n; ++j) {
      cx dot{};
      for (int i = k + 1; i < n; ++i) dot += std::conj(v[std::size_t(i)]) * h(i, j);
      dot *= beta;
      for (int i = k + 1; i < n; ++i) h(i, j) -= dot * v[std::size_t(i)];
    }
    // h <- h (I - beta v v*)
    for (int i = 0; i < n; ++i) {
      cx dot{};
      for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[std::size_t(j)];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[std::size_t(j)]);
    }
    // q <- q (I - beta v v*)
    for (int i = 0; i < n; ++i) {
      cx dot{};
      for (int j = k + 1; j < n; ++j) dot += q(i, j) * v[std::size_t(j)];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) q(i, j) -= dot * std::conj(v[std::size_t(j)]);
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }

  // Implicit single-shift QR with deflation threshold relative to |M|.
  const double defl = tol.qr_deflation_rel * scale;
  const int max_iter = tol.qr_sweeps_per_dim * n;
  int iter = 0;
  int hi = n - 1;
  int stagnation = 0;
  while (hi > 0) {
    for (int i = 1; i <= hi; ++i) {
      if (std::abs(h(i, i - 1)) <=
          std::max(defl, kEps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)))))
        h(i, i - 1) = 0.0;
    }
    if (std::abs(h(hi, hi - 1)) == 0.0) {
      --hi;
      stagnation = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && std::abs(h(lo, lo - 1)) != 0.0) --lo;

    if (++iter > max_iter)
      throw ConvergenceFailure("schur: QR iteration budget exhausted (" +
                               std::to_string(max_iter) + " sweeps)");

    // Wilkinson shift from the trailing 2x2, with a deterministic
    // exceptional shift if a block refuses to deflate.
    cx mu;
    const cx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
    if (++stagnation % 12 == 0) {
      mu = d + cx{0.75, 0.4375} * std::abs(c);
    } else {
      const cx e = 0.5 * (a - d);
      const cx disc = std::sqrt(e * e + b * c);
      const cx mu1 = d + e + disc, mu2 = d + e - disc;
      mu = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;
    }

    cx f = h(lo, lo) - mu;
    cx g = h(lo + 1, lo);
    for (int i = lo; i < hi; ++i) {
      if (i > lo) {
        f = h(i, i - 1);
        g = h(i + 1, i - 1);
      }
      const Givens rot = make_givens(f, g);
      apply_left(h, rot, i, std::max(0, i - 1));
      apply_right(h, rot, i, std::min(n, i + 3));
      apply_right(q, rot, i, n);
      if (i > lo) {
        h(i + 1, i - 1) = 0.0;
      }
    }
  }

  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) h(i, j) = 0.0;
  return {std::move(h), std::move(q)};
}

namespace {

// Right eigenvectors of an upper triangular matrix by back-substitution,
// with safeguarded denominators for coincident diagonal entries.
Mat triangular_eigenvectors(const Mat& t) {
  const int n = t.rows();
  const double scale = std::max(t.max_abs(), 1e-300);
  Mat y(n, n);
  for (int j = 0; j < n; ++j) {
    y(j, j) = 1.0;
    for (int i = j - 1; i >= 0; --i) {
      cx acc{};
      for (int k = i + 1; k <= j; ++k) acc += t(i, k) * y(k, j);
      cx den = t(i, i) - t(j, j);
      if (std::abs(den) < kEps * scale) den = cx{kEps * scale, 0.0};
      y(i, j) = -acc / den;
    }
    double nrm = 0.0;
    for (int i = 0; i <= j; ++i) nrm += std::norm(y(i, j));
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
      for (int i = 0; i <= j; ++i) y(i, j) /= nrm;
  }
  return y;
}

}  // namespace

Mat SpectralDecomposition::cluster_projector(int cluster) const {
  const int n = right.rows();
  Mat p(n, n);
  for (int j = 0; j < n; ++j) {
    if (cluster_map[std::size_t(j)] != cluster) continue;
    for (int r = 0; r < n; ++r)
      for (int cidx = 0; cidx < n; ++cidx) p(r, cidx) += right(r, j) * left(j, cidx);
  }
  return p;
}

SpectralDecomposition eig_general(const Mat& m, const Tolerances& tol) {
  if (!m.square()) throw DimensionMismatch("eig_general: matrix not square");
  const int n = m.rows();
  SchurForm sf = schur(m, tol);
  Mat y = triangular_eigenvectors(sf.t);
  Mat v = sf.q * y;

  SpectralDecomposition out;
  out.eigenvalues.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) out.eigenvalues[std::size_t(i)] = sf.t(i, i);

  // Stable order: descending modulus, then ascending phase. Peripheral
  // eigenvalues of channels come first this way.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y2) {
    const double ax = std::abs(out.eigenvalues[std::size_t(x)]);
    const double ay = std::abs(out.eigenvalues[std::size_t(y2)]);
    if (ax != ay) return ax > ay;
    return std::arg(out.eigenvalues[std::size_t(x)]) < std::arg(out.eigenvalues[std::size_t(y2)]);
  });
  std::vector<cx> sorted_e(static_cast<std::size_t>(n));
  Mat sorted_v(n, n);
  for (int j = 0; j < n; ++j) {
    sorted_e[std::size_t(j)] = out.eigenvalues[std::size_t(order[std::size_t(j)])];
    for (int i = 0; i < n; ++i) sorted_v(i, j) = v(i, order[std::size_t(j)]);
  }
  out.eigenvalues = std::move(sorted_e);
  out.right = std::move(sorted_v);
  try {
    out.left = inverse(out.right);
  } catch (const SingularMatrix&) {
    throw ConvergenceFailure(
        "eig_general: right-eigenvector matrix is singular (matrix is not diagonalizable)");
  }

  // Cluster numerically coincident eigenvalues (union-find, relative tol).
  double emax = 0.0;
  for (const cx& e : out.eigenvalues) emax = std::max(emax, std::abs(e));
  const double ctol = tol.eig_cluster_rel * std::max(1.0, emax);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[std::size_t(x)] != x) {
      parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
      x = parent[std::size_t(x)];
    }
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(out.eigenvalues[std::size_t(i)] - out.eigenvalues[std::size_t(j)]) <= ctol)
        parent[std::size_t(find(j))] = find(i);
  out.cluster_map.assign(std::size_t(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (out.cluster_map[std::size_t(root)] == -1) out.cluster_map[std::size_t(root)] = next++;
    out.cluster_map[std::size_t(i)] = out.cluster_map[std::size_t(root)];
  }
  out.cluster_count = next;

  // Reconstruction residual diagnostic.
  Mat lam = out.right;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) lam(i, j) *= out.eigenvalues[std::size_t(j)];
  Mat rec = lam * out.left;
  rec -= m;
  out.residual = rec.frob_norm();
  return out;
}

Mat inverse(const Mat& a) {
  return solve(a, Mat::identity(a.rows()));
}

Mat solve(const Mat& a, const Mat& b) {
  if (!a.square()) throw DimensionMismatch("solve: coefficient matrix not square");
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: rhs row mismatch");
  const int n = a.rows();
  const int m = b.cols();
  Mat lu = a;
  Mat x = b;
  std::vector<int> piv(static_cast<std::size_t>(n));
  std::iota(piv.begin(), piv.end(), 0);
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu(i, k));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (best <= n * kEps * scale)
      throw SingularMatrix("solve: pivot below machine threshold at column " + std::to_string(k));
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      for (int j = 0; j < m; ++j) std::swap(x(k, j), x(p, j));
    }
    const cx pivot = lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cx f = lu(i, k) / pivot;
      lu(i, k) = f;
      if (f == cx{0.0, 0.0}) continue;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (int j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 0; j < m; ++j) {
      cx acc = x(k, j);
      for (int i = k + 1; i < n; ++i) acc -= lu(k, i) * x(i, j);
      x(k, j) = acc / lu(k, k);
    }
  }
  return x;
}

}  // namespace ris
