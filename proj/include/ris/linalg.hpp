// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <random>

#include "ris/eig.hpp"
#include "ris/mat.hpp"
#include "ris/tolerances.hpp"

namespace ris {

// Tensor product, first factor major:
//   kron(a, b)(i*db + k, j*db + l) = a(i,j) * b(k,l).
Mat kron(const Mat& a, const Mat& b);

// Partial traces over a bipartite space of dimension d_sys * d_env, with the
// system factor major (index = i_sys * d_env + i_env).
Mat partial_trace_env(const Mat& ab, int d_sys, int d_env);
Mat partial_trace_sys(const Mat& ab, int d_sys, int d_env);

// exp(-i t h) for Hermitian h, via eigendecomposition. Rejects non-Hermitian
// input (hermiticity tolerance from `tol`).
Mat herm_propagator(const Mat& h, double t, const Tolerances& tol = Tolerances::defaults());

// f applied to a Hermitian matrix through its spectrum.
Mat herm_func(const Mat& h, const std::function<cx(double)>& f,
              const Tolerances& tol = Tolerances::defaults());

// Singular values, descending.
std::vector<double> singular_values(const Mat& a);
struct Svd {
  Mat u;
  std::vector<double> sigma;
  Mat v;  // a = u diag(sigma) v^*
};
Svd svd(const Mat& a);

double trace_norm(const Mat& a);     // sum of singular values
double operator_norm(const Mat& a);  // largest singular value

// Column-stacked vectorization: vec(X)[i + rows*j] = X(i, j), and its
// inverse. vec(A X B) = kron(B^T, A) vec(X) holds with `kron` above.
std::vector<cx> vec(const Mat& x);
Mat unvec(const std::vector<cx>& v, int rows, int cols);

// Random fixtures (deterministic given the engine state).
Mat random_matrix(int n, std::mt19937_64& rng);
Mat random_hermitian(int n, std::mt19937_64& rng);
Mat random_unit_vector(int n, std::mt19937_64& rng);

}  // namespace ris
