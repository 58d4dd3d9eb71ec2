#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Inner-loop arithmetic kernels.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once at first use from the CPU's capabilities; the environment
// variable STRIVE_SIMD=scalar|avx2|neon overrides the choice. Vector variants
// reassociate reductions, so they agree with the reference to rounding, not
// bitwise; one process always uses one table, which keeps runs reproducible.

namespace strive::simd {

struct KernelTable {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x_i - center)^2
  double (*squared_deviation_sum)(const double* x, std::size_t n, double center);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

const KernelTable& active_kernels() noexcept;

// Forces a table by name ("scalar", "avx2", "neon"). Returns false if that
// table is unavailable here. Meant for tests and diagnostics.
bool select_kernels(std::string_view name) noexcept;

inline double sum(std::span<const double> x) { return active_kernels().sum(x.data(), x.size()); }

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_kernels().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline double squared_deviation_sum(std::span<const double> x, double center) {
  return active_kernels().squared_deviation_sum(x.data(), x.size(), center);
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(a, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline double max_value(std::span<const double> x) { return active_kernels().max_value(x.data(), x.size()); }

// Kernel entry points per variant, defined in kernels_<isa>.cpp.
namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double squared_deviation_sum(const double* x, std::size_t n, double center);
void axpy(double a, const double* x, double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double squared_deviation_sum(const double* x, std::size_t n, double center);
void axpy(double a, const double* x, double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
}  // namespace avx2

namespace neon {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double squared_deviation_sum(const double* x, std::size_t n, double center);
void axpy(double a, const double* x, double* y, std::size_t n);
double max_value(const double* x, std::size_t n);
}  // namespace neon

}  // namespace strive::simd
