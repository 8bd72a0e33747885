// SPDX-License-Identifier: Apache-2.0
//
// AVX2 + FMA kernels. Two interleaved complex doubles per 256-bit lane.
// Complex multiply uses the usual permute/fmaddsub pattern:
//   even lanes: ar*br - ai*bi,  odd lanes: ar*bi + ai*br.
#include "ris/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cstring>

namespace ris::kernels {
namespace {

inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  const __m256d bswap = _mm256_permute_pd(b, 0x5);
  const __m256d t = _mm256_mul_pd(ai, bswap);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, t));
}

void matmul_avx2(const cx* a, const cx* b, cx* c, int n, int k, int m) {
  std::memset(static_cast<void*>(c), 0, sizeof(cx) * std::size_t(n) * m);
  const int m2 = m - (m & 1);
  for (int i = 0; i < n; ++i) {
    const cx* arow = a + std::size_t(i) * k;
    double* crow = reinterpret_cast<double*>(c + std::size_t(i) * m);
    for (int kk = 0; kk < k; ++kk) {
      const cx aik = arow[kk];
      if (aik == cx{0.0, 0.0}) continue;
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* brow = reinterpret_cast<const double*>(b + std::size_t(kk) * m);
      int j = 0;
      for (; j < m2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        cv = cmul_acc(cv, ar, ai, bv);
        _mm256_storeu_pd(crow + 2 * j, cv);
      }
      if (j < m) {
        cx* ctail = c + std::size_t(i) * m + j;
        *ctail += aik * b[std::size_t(kk) * m + j];
      }
    }
  }
}

void axpy_avx2(cx* y, cx alpha, const cx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  const std::size_t n2 = n - (n & 1);
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    yv = cmul_acc(yv, ar, ai, xv);
    _mm256_storeu_pd(yd + 2 * i, yv);
  }
  if (i < n) y[i] += alpha * x[i];
}

void scale_avx2(cx* x, cx alpha, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  double* xd = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  const std::size_t n2 = n - (n & 1);
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0x5);
    const __m256d t = _mm256_mul_pd(ai, xswap);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, xv, t));
  }
  if (i < n) x[i] *= alpha;
}

cx conj_dot_avx2(const cx* x, const cx* y, std::size_t n) {
  // re: sum over lanes of x.*y; im: sum of (xr*yi) - (xi*yr).
  const __m256d odd_neg = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  std::size_t i = 0;
  const std::size_t n2 = n - (n & 1);
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    const __m256d yswap = _mm256_permute_pd(yv, 0x5);
    acc_im = _mm256_add_pd(acc_im, _mm256_xor_pd(_mm256_mul_pd(xv, yswap), odd_neg));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc_re);
  double re = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  _mm256_store_pd(lanes, acc_im);
  double im = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm2sq_avx2(const cx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const double* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  const std::size_t n2 = n - (n & 1);
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{matmul_avx2, axpy_avx2, scale_avx2, conj_dot_avx2,
                       norm2sq_avx2, "avx2"};
  return &ops;
}

}  // namespace ris::kernels

#else
namespace ris::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace ris::kernels
#endif
