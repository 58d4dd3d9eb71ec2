#include <atomic>
#include <cstdlib>
#include <string_view>

#include "strive/simd/kernels.hpp"

namespace strive::simd {

namespace {

constexpr KernelTable kScalarTable{
    "scalar", scalar::sum, scalar::dot, scalar::squared_deviation_sum, scalar::axpy, scalar::max_value,
};

#if defined(STRIVE_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{
    "avx2", avx2::sum, avx2::dot, avx2::squared_deviation_sum, avx2::axpy, avx2::max_value,
};
#endif

#if defined(STRIVE_HAVE_NEON_KERNELS)
constexpr KernelTable kNeonTable{
    "neon", neon::sum, neon::dot, neon::squared_deviation_sum, neon::axpy, neon::max_value,
};
#endif

const KernelTable* by_name(std::string_view name) noexcept {
  if (name == "scalar") return &kScalarTable;
  if (name == "avx2") return avx2_kernels();
  if (name == "neon") return neon_kernels();
  return nullptr;
}

const KernelTable* detect() noexcept {
  if (const char* forced = std::getenv("STRIVE_SIMD"); forced != nullptr) {
    if (const KernelTable* t = by_name(forced)) return t;
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &kScalarTable;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

const KernelTable* avx2_kernels() noexcept {
#if defined(STRIVE_HAVE_AVX2_KERNELS)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(STRIVE_HAVE_NEON_KERNELS)
  return &kNeonTable;  // AdvSIMD is mandatory on aarch64
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&kScalarTable};
  if (const KernelTable* t = avx2_kernels()) out.push_back(t);
  if (const KernelTable* t = neon_kernels()) out.push_back(t);
  return out;
}

const KernelTable& active_kernels() noexcept {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* expected = nullptr;
    g_active.compare_exchange_strong(expected, detect(), std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

bool select_kernels(std::string_view name) noexcept {
  const KernelTable* t = by_name(name);
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

}  // namespace strive::simd
