#include "strive/variants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strive/errors.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

std::string_view to_string(VariantMode mode) noexcept {
  switch (mode) {
    case VariantMode::deterministic:
      return "deterministic";
    case VariantMode::stochastic:
      return "stochastic";
    case VariantMode::importance:
      return "importance";
  }
  return "unknown";
}

VariantMode parse_variant_mode(std::string_view text) {
  if (text == "deterministic") return VariantMode::deterministic;
  if (text == "stochastic") return VariantMode::stochastic;
  if (text == "importance") return VariantMode::importance;
  throw ConfigError("variant_mode",
                    "expected one of deterministic|stochastic|importance, got '" + std::string(text) + "'");
}

bool AugmentParams::within_range() const noexcept {
  return std::abs(color_jitter) <= kMaxColorJitter && std::abs(rotation_deg) <= kMaxRotationDeg &&
         std::abs(translate_frac) <= kMaxTranslateFrac && scale >= kMinScale && scale <= kMaxScale;
}

double AugmentParams::strength() const noexcept {
  return (std::abs(color_jitter) / kMaxColorJitter + std::abs(rotation_deg) / kMaxRotationDeg +
          std::abs(translate_frac) / kMaxTranslateFrac + std::abs(scale - 1.0) / (kMaxScale - 1.0)) /
         4.0;
}

AugmentParams AugmentParams::sample(RandomStream& rng) {
  AugmentParams p;
  p.color_jitter = rng.uniform(-kMaxColorJitter, kMaxColorJitter);
  p.rotation_deg = rng.uniform(-kMaxRotationDeg, kMaxRotationDeg);
  p.translate_frac = rng.uniform(-kMaxTranslateFrac, kMaxTranslateFrac);
  p.scale = rng.uniform(kMinScale, kMaxScale);
  return p;
}

VariantSpec deterministic_variant_indices(std::size_t num_frames, std::size_t budget, std::size_t num_variants,
                                          std::size_t variant_id) {
  if (budget < 1 || num_variants < 1 || num_frames < 1) {
    throw BudgetInfeasibleError("budget-infeasible: frames, budget and variant count must be positive");
  }
  if (variant_id >= num_variants) {
    throw IndexError("variant id " + std::to_string(variant_id) + " outside [0, " + std::to_string(num_variants - 1) +
                     "]");
  }
  // Offsets 0..M-1 are all below the stride, which keeps variants disjoint.
  const std::size_t stride = std::max(num_variants, num_frames / budget);
  const std::size_t last = variant_id + (budget - 1) * stride;
  if (last > num_frames - 1) {
    throw BudgetInfeasibleError("budget-infeasible: variant " + std::to_string(variant_id) + " with stride " +
                                std::to_string(stride) + " needs frame " + std::to_string(last) + " but only " +
                                std::to_string(num_frames) + " frames exist");
  }
  VariantSpec spec;
  spec.variant_id = variant_id;
  spec.frame_indices.reserve(budget);
  for (std::size_t j = 0; j < budget; ++j) spec.frame_indices.push_back(variant_id + j * stride);
  return spec;
}

SegmentPartition partition_segments(std::size_t num_frames, std::size_t num_segments) {
  if (num_frames < 1 || num_segments < 1) throw InvalidSegmentError("partition needs F >= 1 and K >= 1");
  SegmentPartition out;
  out.requested_segments = num_segments;
  std::size_t k = num_segments;
  if (num_frames < k) {
    out.warning = "segment count " + std::to_string(k) + " exceeds frame count " + std::to_string(num_frames) +
                  "; clamped to " + std::to_string(num_frames);
    k = num_frames;
  }
  const std::size_t base = num_frames / k;
  const std::size_t longer = num_frames % k;
  out.bounds.reserve(k);
  std::size_t start = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t len = base + (s < longer ? 1 : 0);
    out.bounds.emplace_back(start, start + len - 1);
    start += len;
  }
  return out;
}

std::vector<double> segment_softmax(std::span<const double> scores, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidTemperatureError("temperature must be finite and > 0");
  if (scores.empty()) throw InvalidSegmentError("cannot sample from an empty segment");
  for (double s : scores) {
    if (!std::isfinite(s)) throw InvalidValueError("segment scores must be finite");
  }
  const double top = simd::max_value(scores);
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) p[i] = std::exp((scores[i] - top) / tau);
  const double z = simd::sum(p);
  for (double& v : p) v /= z;
  return p;
}

std::size_t sample_segment_frame(std::span<const double> scores, double tau, RandomStream& rng) {
  const std::vector<double> p = segment_softmax(scores, tau);
  const double u = rng.uniform();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) last_positive = i;
    cdf += p[i];
    if (u < cdf && p[i] > 0.0) return i;
  }
  // Rounding left the cdf just below 1.
  return last_positive;
}

std::vector<VariantSpec> importance_variant_indices(std::span<const double> scores, std::size_t budget, double tau,
                                                    std::size_t num_variants, const RandomStream& rng) {
  if (scores.empty()) throw InvalidSegmentError("importance sampling needs at least one frame score");
  const SegmentPartition partition = partition_segments(scores.size(), budget);
  std::vector<VariantSpec> out(num_variants);
  for (std::size_t v = 0; v < num_variants; ++v) {
    const RandomStream variant_stream = rng.child(v);
    VariantSpec& spec = out[v];
    spec.variant_id = v;
    spec.frame_indices.reserve(partition.bounds.size());
    for (std::size_t k = 0; k < partition.bounds.size(); ++k) {
      const auto [start, end] = partition.bounds[k];
      RandomStream segment_stream = variant_stream.child(k);
      const std::size_t t = sample_segment_frame(scores.subspan(start, end - start + 1), tau, segment_stream);
      spec.frame_indices.push_back(start + t);
    }
  }
  return out;
}

VariantSpec stochastic_variant_spec(std::size_t num_frames, std::size_t budget, RandomStream& rng,
                                    const StochasticOptions& options) {
  if (budget < 1) throw BudgetInfeasibleError("budget-infeasible: budget must be positive");
  if (num_frames < budget) {
    throw BudgetInfeasibleError("budget-infeasible: " + std::to_string(num_frames) + " frames cannot supply a budget of " +
                                std::to_string(budget));
  }

  std::size_t start = 0;
  std::size_t length = 0;
  if (options.window_length) {
    length = std::clamp(*options.window_length, budget, num_frames);
    start = rng.uniform_index(0, num_frames - length);
  } else {
    // Uniform over every window [a, b] with b - a + 1 >= budget. Windows of
    // length L number F - L + 1; walk the lengths to decode the draw.
    const std::size_t n = num_frames - budget + 1;
    std::size_t pick = rng.uniform_index(0, n * (n + 1) / 2 - 1);
    for (length = budget; length <= num_frames; ++length) {
      const std::size_t count = num_frames - length + 1;
      if (pick < count) {
        start = pick;
        break;
      }
      pick -= count;
    }
  }

  VariantSpec spec;
  spec.frame_indices.reserve(budget);
  if (budget == 1) {
    spec.frame_indices.push_back(start);
  } else {
    // Round-half-up of j * (L - 1) / (budget - 1); the step is >= 1 so the
    // rounded positions stay strictly increasing.
    const std::size_t span = length - 1;
    const std::size_t denom = budget - 1;
    for (std::size_t j = 0; j < budget; ++j) {
      spec.frame_indices.push_back(start + (2 * j * span + denom) / (2 * denom));
    }
  }
  spec.augment = AugmentParams::sample(rng);
  return spec;
}

}  // namespace strive
