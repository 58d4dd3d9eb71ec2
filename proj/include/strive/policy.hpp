#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "strive/matrix.hpp"
#include "strive/rng.hpp"
#include "strive/variants.hpp"

namespace strive {

// Linear-softmax policy over A answers: pi(a | x) = softmax(W x)_a with W of
// shape A x D_feat. Stands in for the multimodal model; one categorical draw
// is one "generation".
struct PolicyParams {
  Matrix weights;

  static PolicyParams zeros(std::size_t num_answers, std::size_t feature_dim) {
    return {Matrix(num_answers, feature_dim, 0.0)};
  }

  std::size_t num_answers() const noexcept { return weights.rows(); }
  std::size_t feature_dim() const noexcept { return weights.cols(); }

  bool operator==(const PolicyParams&) const = default;
};

enum class SnapshotRole { old, ref };

// Frozen copy of the parameters for the ratio denominator (old) or the KL
// anchor (ref).
class PolicySnapshot {
 public:
  PolicySnapshot(PolicyParams params, SnapshotRole role) : params_(std::move(params)), role_(role) {}

  const PolicyParams& params() const noexcept { return params_; }
  SnapshotRole role() const noexcept { return role_; }

 private:
  PolicyParams params_;
  SnapshotRole role_;
};

// Mean of the selected frames' feature rows. A variant carrying augmentation
// gets an extra random direction (drawn from `stream`) whose norm is
// 0.5 * strength * ||mean||.
std::vector<double> aggregate_features(const Matrix& frame_features, const VariantSpec& variant,
                                       const RandomStream& stream);

std::vector<double> answer_logits(const PolicyParams& params, std::span<const double> features);
std::vector<double> answer_distribution(const PolicyParams& params, std::span<const double> features);

// Inverse-CDF categorical draw.
std::size_t sample_answer(std::span<const double> distribution, RandomStream& rng);

double logprob(const PolicyParams& params, std::span<const double> features, std::size_t answer);

// d log pi(answer | x) / dW = (onehot(answer) - pi) x^T.
Matrix logprob_gradient(const PolicyParams& params, std::span<const double> features, std::size_t answer);

// W + learning_rate * gradient. Throws UpdateRejectedError on a non-finite
// gradient; the input parameters are never modified.
PolicyParams apply_update(const PolicyParams& params, const Matrix& gradient, double learning_rate);

// Lowest index among the maximal entries.
std::size_t argmax(std::span<const double> values);

}  // namespace strive
