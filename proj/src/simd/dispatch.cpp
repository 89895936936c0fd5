// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <stdexcept>
#include <string>

#include "denslab/simd/kernels.hpp"

namespace denslab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa best_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(best_isa())};
  return table;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DENSLAB_HAVE_AVX2_TU)
      return cpu_has_avx2();
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("ISA not available on this CPU: " +
                                std::string(isa_name(isa)));
  return isa == Isa::avx2 ? avx2_kernels() : scalar_kernels();
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) {
  active_table().store(&kernels_for(isa), std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace denslab::simd
