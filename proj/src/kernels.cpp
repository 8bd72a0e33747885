// SPDX-License-Identifier: Apache-2.0
#include "ris/kernels.hpp"

#include <atomic>

namespace ris::kernels {

// Defined in kernels_avx2.cpp (returns nullptr when not compiled in).
const Ops* avx2_ops_impl();

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* detect() {
  if (const Ops* v = avx2_ops(); v != nullptr) return v;
  return &scalar_ops();
}

}  // namespace

const Ops* avx2_ops() {
  const Ops* impl = avx2_ops_impl();
  if (impl == nullptr || !cpu_has_avx2()) return nullptr;
  return impl;
}

const Ops& active_ops() {
  const Ops* cur = g_active.load(std::memory_order_acquire);
  if (cur == nullptr) {
    cur = detect();
    g_active.store(cur, std::memory_order_release);
  }
  return *cur;
}

bool set_backend(Backend b) {
  switch (b) {
    case Backend::Auto:
      g_active.store(detect(), std::memory_order_release);
      return true;
    case Backend::Scalar:
      g_active.store(&scalar_ops(), std::memory_order_release);
      return true;
    case Backend::Avx2: {
      const Ops* v = avx2_ops();
      if (v == nullptr) return false;
      g_active.store(v, std::memory_order_release);
      return true;
    }
  }
  return false;
}

std::string active_backend_name() { return active_ops().name; }

}  // namespace ris::kernels
