// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace ris::kernels {

using cx = std::complex<double>;

// Flat complex-double kernels behind the dense matrix type. Two
// implementations exist: a scalar reference and an AVX2 variant compiled in
// its own translation unit. Dispatch is resolved once at startup from CPU
// capabilities; `set_backend` overrides it (tests pin both variants against
// each other). All kernels use the same i-k-j accumulation order, so the
// variants agree to rounding (FMA contraction differs, exact equality does
// not hold).
//
// TODO: NEON variant for aarch64 hosts; they currently take the scalar path.
struct Ops {
  // c (n x m) = a (n x k) * b (k x m), row-major, c fully overwritten.
  void (*matmul)(const cx* a, const cx* b, cx* c, int n, int k, int m);
  // y += alpha * x
  void (*axpy)(cx* y, cx alpha, const cx* x, std::size_t n);
  // x *= alpha
  void (*scale)(cx* x, cx alpha, std::size_t n);
  // sum conj(x[i]) * y[i]
  cx (*conj_dot)(const cx* x, const cx* y, std::size_t n);
  // sum |x[i]|^2
  double (*norm2sq)(const cx* x, std::size_t n);
  const char* name;
};

enum class Backend { Auto, Scalar, Avx2 };

const Ops& scalar_ops();
// Null when the binary was built without the AVX2 TU or the CPU lacks AVX2.
const Ops* avx2_ops();

// The currently active table (auto-selected unless overridden).
const Ops& active_ops();
// Returns false if the requested backend is unavailable (state unchanged).
bool set_backend(Backend b);
std::string active_backend_name();

}  // namespace ris::kernels
