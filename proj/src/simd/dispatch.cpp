#include <atomic>
#include <cstdlib>
#include <string_view>

#include "qns/simd/kernels.hpp"

namespace qns::simd {

#if defined(QNS_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

namespace {

std::atomic<const KernelTable*> g_forced{nullptr};

bool cpu_has_avx2() {
#if defined(QNS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& detect() {
  if (const char* env = std::getenv("QNS_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(QNS_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) return *forced;
  static const KernelTable& detected = detect();
  return detected;
}

void force_kernels(const KernelTable* table) { g_forced.store(table, std::memory_order_release); }

}  // namespace qns::simd
