#include "strive/policy.hpp"

#include <cmath>
#include <string>

#include "strive/errors.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

namespace {

void require_features(const PolicyParams& params, std::span<const double> features) {
  if (features.size() != params.feature_dim()) {
    throw ShapeError("feature vector has " + std::to_string(features.size()) + " entries, policy expects " +
                     std::to_string(params.feature_dim()));
  }
}

void require_answer(const PolicyParams& params, std::size_t answer) {
  if (answer >= params.num_answers()) {
    throw IndexError("answer " + std::to_string(answer) + " outside [0, " + std::to_string(params.num_answers() - 1) +
                     "]");
  }
}

double log_sum_exp(std::span<const double> logits, double top) {
  double z = 0.0;
  for (double l : logits) z += std::exp(l - top);
  return top + std::log(z);
}

}  // namespace

std::vector<double> aggregate_features(const Matrix& frame_features, const VariantSpec& variant,
                                       const RandomStream& stream) {
  if (variant.frame_indices.empty()) throw IndexError("variant selects no frames");
  const std::size_t dim = frame_features.cols();
  std::vector<double> mean(dim, 0.0);
  for (std::size_t idx : variant.frame_indices) {
    if (idx >= frame_features.rows()) {
      throw IndexError("frame index " + std::to_string(idx) + " outside [0, " +
                       std::to_string(frame_features.rows()) + ")");
    }
    simd::axpy(1.0, frame_features.row(idx), mean);
  }
  const double inv = 1.0 / static_cast<double>(variant.frame_indices.size());
  for (double& x : mean) x *= inv;

  if (variant.augment) {
    const double target = 0.5 * variant.augment->strength() * std::sqrt(simd::dot(mean, mean));
    if (target > 0.0) {
      RandomStream rng = stream.child("augment");
      std::vector<double> direction(dim);
      double norm2 = 0.0;
      while (!(norm2 > 0.0)) {
        for (double& d : direction) d = rng.normal();
        norm2 = simd::dot(direction, direction);
      }
      simd::axpy(target / std::sqrt(norm2), direction, mean);
    }
  }
  return mean;
}

std::vector<double> answer_logits(const PolicyParams& params, std::span<const double> features) {
  require_features(params, features);
  std::vector<double> logits(params.num_answers());
  for (std::size_t a = 0; a < logits.size(); ++a) logits[a] = simd::dot(params.weights.row(a), features);
  return logits;
}

std::vector<double> answer_distribution(const PolicyParams& params, std::span<const double> features) {
  std::vector<double> p = answer_logits(params, features);
  const double top = simd::max_value(p);
  for (double& v : p) v = std::exp(v - top);
  const double z = simd::sum(p);
  for (double& v : p) v /= z;
  return p;
}

std::size_t sample_answer(std::span<const double> distribution, RandomStream& rng) {
  if (distribution.empty()) throw InvalidValueError("empty answer distribution");
  double total = 0.0;
  for (double p : distribution) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidValueError("answer probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidValueError("answer probabilities must sum to 1");

  const double u = rng.uniform();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    if (distribution[i] > 0.0) last_positive = i;
    cdf += distribution[i];
    if (u < cdf && distribution[i] > 0.0) return i;
  }
  return last_positive;
}

double logprob(const PolicyParams& params, std::span<const double> features, std::size_t answer) {
  require_answer(params, answer);
  const std::vector<double> logits = answer_logits(params, features);
  return logits[answer] - log_sum_exp(logits, simd::max_value(logits));
}

Matrix logprob_gradient(const PolicyParams& params, std::span<const double> features, std::size_t answer) {
  require_answer(params, answer);
  const std::vector<double> p = answer_distribution(params, features);
  Matrix grad(params.num_answers(), params.feature_dim(), 0.0);
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double coeff = (a == answer ? 1.0 : 0.0) - p[a];
    simd::axpy(coeff, features, grad.row(a));
  }
  return grad;
}

PolicyParams apply_update(const PolicyParams& params, const Matrix& gradient, double learning_rate) {
  if (gradient.rows() != params.weights.rows() || gradient.cols() != params.weights.cols()) {
    throw ShapeError("gradient shape does not match policy weights");
  }
  for (double g : gradient.flat()) {
    if (!std::isfinite(g)) throw UpdateRejectedError("update rejected: gradient has a non-finite entry");
  }
  if (!std::isfinite(learning_rate)) throw UpdateRejectedError("update rejected: non-finite learning rate");
  PolicyParams next = params;
  simd::axpy(learning_rate, gradient.flat(), next.weights.flat());
  return next;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace strive
