#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace strive {

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for a named child of `parent`. Depends only on (parent, tag), never on
// how many values the parent stream has produced.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept;
std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) noexcept;

// A seeded pseudo-random stream with deterministic sub-stream derivation.
//
// Every random decision in the library takes a stream explicitly. Sub-streams
// are addressed by a path of tags from the master seed, e.g.
//   master.child("train").child(step).child(episode).child("answers")
// so work can be reordered or parallelized without changing any draw.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  RandomStream child(std::uint64_t tag) const { return RandomStream(derive_seed(seed_, tag)); }
  RandomStream child(std::string_view tag) const { return RandomStream(derive_seed(seed_, tag)); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on the closed range [lo, hi].
  std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi);

  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace strive
