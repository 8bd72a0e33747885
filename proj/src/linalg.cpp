// SPDX-License-Identifier: Apache-2.0
#include "ris/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "ris/errors.hpp"

namespace ris {

Mat kron(const Mat& a, const Mat& b) {
  const int ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  Mat out(ar * br, ac * bc);
  for (int i = 0; i < ar; ++i)
    for (int j = 0; j < ac; ++j) {
      const cx aij = a(i, j);
      if (aij == cx{0.0, 0.0}) continue;
      for (int k = 0; k < br; ++k)
        for (int l = 0; l < bc; ++l) out(i * br + k, j * bc + l) = aij * b(k, l);
    }
  return out;
}

Mat partial_trace_env(const Mat& ab, int d_sys, int d_env) {
  if (ab.rows() != d_sys * d_env || !ab.square())
    throw DimensionMismatch("partial_trace_env: dimension mismatch");
  Mat out(d_sys, d_sys);
  for (int i = 0; i < d_sys; ++i)
    for (int j = 0; j < d_sys; ++j) {
      cx acc{};
      for (int k = 0; k < d_env; ++k) acc += ab(i * d_env + k, j * d_env + k);
      out(i, j) = acc;
    }
  return out;
}

Mat partial_trace_sys(const Mat& ab, int d_sys, int d_env) {
  if (ab.rows() != d_sys * d_env || !ab.square())
    throw DimensionMismatch("partial_trace_sys: dimension mismatch");
  Mat out(d_env, d_env);
  for (int k = 0; k < d_env; ++k)
    for (int l = 0; l < d_env; ++l) {
      cx acc{};
      for (int i = 0; i < d_sys; ++i) acc += ab(i * d_env + k, i * d_env + l);
      out(k, l) = acc;
    }
  return out;
}

Mat herm_func(const Mat& h, const std::function<cx(double)>& f, const Tolerances& tol) {
  const HermEig eg = eig_hermitian(h, tol);
  const int n = h.rows();
  Mat scaled = eg.vectors;  // columns scaled by f(w_j)
  for (int j = 0; j < n; ++j) {
    const cx fj = f(eg.eigenvalues[std::size_t(j)]);
    for (int i = 0; i < n; ++i) scaled(i, j) *= fj;
  }
  return scaled * eg.vectors.adjoint();
}

Mat herm_propagator(const Mat& h, double t, const Tolerances& tol) {
  return herm_func(h, [t](double w) { return std::exp(cx{0.0, -t * w}); }, tol);
}

std::vector<double> singular_values(const Mat& a) {
  // Eigenvalues of the Hermitian embedding [[0, A], [A*, 0]] are +/- the
  // singular values; accurate for small sigma as well.
  const int r = a.rows(), c = a.cols();
  Mat emb(r + c, r + c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      emb(i, r + j) = a(i, j);
      emb(r + j, i) = std::conj(a(i, j));
    }
  Tolerances tol;
  tol.hermiticity = 1e-9;  // embedding is Hermitian by construction
  const HermEig eg = eig_hermitian(emb, tol);
  const int n = std::min(r, c);
  std::vector<double> sv(static_cast<std::size_t>(n));
  // eigenvalues ascending; the top n are the singular values
  for (int i = 0; i < n; ++i)
    sv[std::size_t(i)] = std::max(0.0, eg.eigenvalues[std::size_t(r + c - 1 - i)]);
  return sv;
}

Svd svd(const Mat& a) {
  const int r = a.rows(), c = a.cols();
  Mat emb(r + c, r + c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      emb(i, r + j) = a(i, j);
      emb(r + j, i) = std::conj(a(i, j));
    }
  Tolerances tol;
  tol.hermiticity = 1e-9;
  const HermEig eg = eig_hermitian(emb, tol);
  const int n = std::min(r, c);
  double smax = std::max(std::abs(eg.eigenvalues.front()), std::abs(eg.eigenvalues.back()));
  const double cutoff = std::max(1e-300, 1e-14 * smax);

  // Keep pairs with sigma above the cutoff; their embedding eigenvectors are
  // (u; v)/sqrt(2) and the halves renormalize cleanly.
  Svd out;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    const int idx = r + c - 1 - i;
    if (eg.eigenvalues[std::size_t(idx)] > cutoff) keep.push_back(idx);
  }
  out.u = Mat(r, int(keep.size()));
  out.v = Mat(c, int(keep.size()));
  for (std::size_t kcol = 0; kcol < keep.size(); ++kcol) {
    const int idx = keep[kcol];
    out.sigma.push_back(eg.eigenvalues[std::size_t(idx)]);
    double un = 0.0, vn = 0.0;
    for (int i = 0; i < r; ++i) un += std::norm(eg.vectors(i, idx));
    for (int j = 0; j < c; ++j) vn += std::norm(eg.vectors(r + j, idx));
    un = std::sqrt(un);
    vn = std::sqrt(vn);
    for (int i = 0; i < r; ++i) out.u(i, int(kcol)) = eg.vectors(i, idx) / un;
    for (int j = 0; j < c; ++j) out.v(j, int(kcol)) = eg.vectors(r + j, idx) / vn;
  }
  return out;
}

double trace_norm(const Mat& a) {
  const std::vector<double> sv = singular_values(a);
  double s = 0.0;
  for (double x : sv) s += x;
  return s;
}

double operator_norm(const Mat& a) {
  const std::vector<double> sv = singular_values(a);
  return sv.empty() ? 0.0 : sv.front();
}

std::vector<cx> vec(const Mat& x) {
  std::vector<cx> v(std::size_t(x.rows()) * x.cols());
  for (int j = 0; j < x.cols(); ++j)
    for (int i = 0; i < x.rows(); ++i) v[std::size_t(i) + std::size_t(x.rows()) * j] = x(i, j);
  return v;
}

Mat unvec(const std::vector<cx>& v, int rows, int cols) {
  if (v.size() != std::size_t(rows) * cols) throw DimensionMismatch("unvec: size mismatch");
  Mat x(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) x(i, j) = v[std::size_t(i) + std::size_t(rows) * j];
  return x;
}

Mat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cx{g(rng), g(rng)} / std::sqrt(2.0);
  return m;
}

Mat random_hermitian(int n, std::mt19937_64& rng) {
  return hermitian_part(random_matrix(n, rng));
}

Mat random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat v(n, 1);
  double nrm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    v(i, 0) = cx{g(rng), g(rng)};
    nrm2 += std::norm(v(i, 0));
  }
  v *= cx{1.0 / std::sqrt(nrm2), 0.0};
  return v;
}

}  // namespace ris
