#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strive/rng.hpp"

namespace strive {

enum class VariantMode { deterministic, stochastic, importance };

std::string_view to_string(VariantMode mode) noexcept;
VariantMode parse_variant_mode(std::string_view text);

// Spatial augmentation, kept as a parameter record. Pixels are never touched;
// toy_policy maps the magnitude onto a feature-space perturbation.
struct AugmentParams {
  static constexpr double kMaxColorJitter = 0.4;
  static constexpr double kMaxRotationDeg = 5.0;
  static constexpr double kMaxTranslateFrac = 0.05;
  static constexpr double kMinScale = 0.95;
  static constexpr double kMaxScale = 1.05;

  double color_jitter = 0.0;
  double rotation_deg = 0.0;
  double translate_frac = 0.0;
  double scale = 1.0;

  bool within_range() const noexcept;

  // Mean of the four fields' magnitudes, each normalized to its range: 0 for
  // the identity transform, 1 at the extremes.
  double strength() const noexcept;

  static AugmentParams sample(RandomStream& rng);

  bool operator==(const AugmentParams&) const = default;
};

struct VariantSpec {
  std::vector<std::size_t> frame_indices;  // strictly increasing
  std::optional<AugmentParams> augment;
  std::size_t variant_id = 0;

  bool operator==(const VariantSpec&) const = default;
};

struct SegmentPartition {
  std::vector<std::pair<std::size_t, std::size_t>> bounds;  // inclusive [start, end]
  std::size_t requested_segments = 0;
  std::optional<std::string> warning;  // set when K was clamped to F
};

// Staggered strided view: variant i takes frames i, i+s, ..., i+(budget-1)s
// with stride s = max(M, floor(F / budget)). Distinct variants are disjoint.
VariantSpec deterministic_variant_indices(std::size_t num_frames, std::size_t budget, std::size_t num_variants,
                                          std::size_t variant_id);

// Near-equal contiguous tiling of [0, F-1]; the first F mod K segments are
// one frame longer. K > F is clamped to F with a warning.
SegmentPartition partition_segments(std::size_t num_frames, std::size_t num_segments);

// exp(s_t / tau) / sum_u exp(s_u / tau), max-subtracted.
std::vector<double> segment_softmax(std::span<const double> scores, double tau);

// Draws one index within the segment with segment_softmax probabilities.
std::size_t sample_segment_frame(std::span<const double> scores, double tau, RandomStream& rng);

// One frame per segment per variant. Variant v, segment k draws from
// rng.child(v).child(k), so variants are independent and replayable.
std::vector<VariantSpec> importance_variant_indices(std::span<const double> scores, std::size_t budget, double tau,
                                                    std::size_t num_variants, const RandomStream& rng);

struct StochasticOptions {
  // Forces the crop window length (clamped to [budget, F]). When unset the
  // window is drawn uniformly over all feasible [a, b].
  std::optional<std::size_t> window_length;
};

// Random temporal crop, uniform stride inside the crop, random augmentation.
VariantSpec stochastic_variant_spec(std::size_t num_frames, std::size_t budget, RandomStream& rng,
                                    const StochasticOptions& options = {});

}  // namespace strive
