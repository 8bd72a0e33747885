// SPDX-License-Identifier: Apache-2.0
#include "ris/kernels.hpp"

#include <cstring>

namespace ris::kernels {
namespace {

void matmul_scalar(const cx* a, const cx* b, cx* c, int n, int k, int m) {
  std::memset(static_cast<void*>(c), 0, sizeof(cx) * std::size_t(n) * m);
  for (int i = 0; i < n; ++i) {
    const cx* arow = a + std::size_t(i) * k;
    cx* crow = c + std::size_t(i) * m;
    for (int kk = 0; kk < k; ++kk) {
      const cx aik = arow[kk];
      if (aik == cx{0.0, 0.0}) continue;
      const cx* brow = b + std::size_t(kk) * m;
      for (int j = 0; j < m; ++j) crow[j] += aik * brow[j];
    }
  }
}

void axpy_scalar(cx* y, cx alpha, const cx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cx* x, cx alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

cx conj_dot_scalar(const cx* x, const cx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm2sq_scalar(const cx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{matmul_scalar, axpy_scalar, scale_scalar,
                       conj_dot_scalar, norm2sq_scalar, "scalar"};
  return ops;
}

}  // namespace ris::kernels
