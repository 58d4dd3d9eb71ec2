#include "strive/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strive/errors.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidValueError(std::string(what) + " contains a non-finite value");
  }
}

void require_group(std::span<const double> rewards) {
  if (rewards.size() < 2) {
    throw InvalidGroupError("advantage group needs at least 2 rewards, got " + std::to_string(rewards.size()));
  }
  require_finite(rewards, "reward group");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                     ", got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_compatible(const SampleLikelihoods& l, const AdvantageMatrix& a) {
  require_same_shape(l.logprob_current, a.values, "logprob_current");
  require_same_shape(l.logprob_old, a.values, "logprob_old");
  require_same_shape(l.logprob_ref, a.values, "logprob_ref");
  if (a.values.empty()) throw ShapeError("objective over an empty sample set");
}

}  // namespace

std::string_view to_string(AdvantageMode mode) noexcept {
  switch (mode) {
    case AdvantageMode::grpo:
      return "grpo";
    case AdvantageMode::dr_grpo:
      return "dr_grpo";
    case AdvantageMode::strive_joint:
      return "strive_joint";
  }
  return "unknown";
}

AdvantageMode parse_advantage_mode(std::string_view text) {
  if (text == "grpo") return AdvantageMode::grpo;
  if (text == "dr_grpo") return AdvantageMode::dr_grpo;
  if (text == "strive_joint") return AdvantageMode::strive_joint;
  throw ConfigError("group.advantage_mode", "expected one of grpo|dr_grpo|strive_joint, got '" + std::string(text) + "'");
}

void GroupConfig::validate() const {
  if (num_generations < 1) throw ConfigError("group.G", "must be a positive integer");
  if (num_variants < 1) throw ConfigError("group.M", "must be a positive integer");
  if (!(clip_epsilon > 0.0) || !std::isfinite(clip_epsilon)) throw ConfigError("group.clip_epsilon", "must be > 0");
  if (!(kl_coeff >= 0.0) || !std::isfinite(kl_coeff)) throw ConfigError("group.kl_coeff", "must be >= 0");
  if (!(std_guard > 0.0) || !std::isfinite(std_guard)) throw ConfigError("group.std_guard", "must be > 0");
}

PopulationStats population_stats(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = simd::sum(values) / n;
  // Population variance. Switch the divisor to (n - 1) for the sample estimate.
  const double variance = simd::squared_deviation_sum(values, mean) / n;
  return {mean, std::sqrt(variance)};
}

GroupAdvantages group_normalized_advantage(std::span<const double> rewards, double guard) {
  require_group(rewards);
  const PopulationStats stats = population_stats(rewards);
  GroupAdvantages out;
  out.values.assign(rewards.size(), 0.0);
  if (stats.stddev < guard) {
    out.zero_flag = true;
    return out;
  }
  const double inv = 1.0 / stats.stddev;
  for (std::size_t i = 0; i < rewards.size(); ++i) out.values[i] = (rewards[i] - stats.mean) * inv;
  return out;
}

std::vector<double> mean_only_advantage(std::span<const double> rewards) {
  require_group(rewards);
  const double mean = simd::sum(rewards) / static_cast<double>(rewards.size());
  std::vector<double> out(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = rewards[i] - mean;
  return out;
}

AdvantageMatrix joint_dual_group_advantage(const RewardMatrix& rewards, double guard) {
  const Matrix& r = rewards.values;
  if (r.rows() < 1 || r.cols() < 1) throw InvalidGroupError("reward matrix must be at least 1x1");
  GroupAdvantages flat = group_normalized_advantage(r.flat(), guard);
  return {Matrix(r.rows(), r.cols(), std::move(flat.values)), flat.zero_flag};
}

double kl_penalty(double logprob_current, double logprob_ref) {
  if (!std::isfinite(logprob_current) || !std::isfinite(logprob_ref)) {
    throw InvalidValueError("kl_penalty: non-finite log-probability");
  }
  const double log_rho = logprob_ref - logprob_current;
  // rho - log(rho) - 1, written with expm1 so it stays accurate near rho = 1.
  return std::max(0.0, std::expm1(log_rho) - log_rho);
}

double kl_penalty_gradient(double logprob_current, double logprob_ref) {
  return -std::expm1(logprob_ref - logprob_current);
}

double clipped_surrogate_term(double ratio, double advantage, double epsilon) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InvalidValueError("probability ratio must be finite and > 0");
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

bool unclipped_branch_active(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return ratio * advantage <= clipped * advantage;
}

double objective_value(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                       const GroupConfig& config) {
  const ObjectiveDiagnostics d = objective_diagnostics(likelihoods, advantages, config);
  return d.surrogate_mean - config.kl_coeff * d.kl_mean;
}

Matrix objective_gradient_coefficients(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                                       const GroupConfig& config) {
  require_compatible(likelihoods, advantages);
  const auto current = likelihoods.logprob_current.flat();
  const auto old = likelihoods.logprob_old.flat();
  const auto ref = likelihoods.logprob_ref.flat();
  const auto adv = advantages.values.flat();
  const double inv_n = 1.0 / static_cast<double>(adv.size());

  Matrix out(advantages.values.rows(), advantages.values.cols());
  auto coeff = out.flat();
  for (std::size_t k = 0; k < adv.size(); ++k) {
    const double ratio = std::exp(current[k] - old[k]);
    // d(ratio * A) / d logprob_current = ratio * A
    const double surrogate = unclipped_branch_active(ratio, adv[k], config.clip_epsilon) ? ratio * adv[k] : 0.0;
    const double kl = config.kl_coeff == 0.0 ? 0.0 : config.kl_coeff * kl_penalty_gradient(current[k], ref[k]);
    coeff[k] = (surrogate - kl) * inv_n;
  }
  return out;
}

ObjectiveDiagnostics objective_diagnostics(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                                           const GroupConfig& config) {
  require_compatible(likelihoods, advantages);
  const auto current = likelihoods.logprob_current.flat();
  const auto old = likelihoods.logprob_old.flat();
  const auto ref = likelihoods.logprob_ref.flat();
  const auto adv = advantages.values.flat();

  double surrogate = 0.0;
  double kl = 0.0;
  std::size_t clipped = 0;
  for (std::size_t k = 0; k < adv.size(); ++k) {
    if (!std::isfinite(current[k]) || !std::isfinite(old[k])) {
      throw InvalidValueError("objective: non-finite log-probability");
    }
    const double ratio = std::exp(current[k] - old[k]);
    surrogate += clipped_surrogate_term(ratio, adv[k], config.clip_epsilon);
    kl += kl_penalty(current[k], ref[k]);
    if (!unclipped_branch_active(ratio, adv[k], config.clip_epsilon)) ++clipped;
  }
  const double n = static_cast<double>(adv.size());
  return {surrogate / n, kl / n, static_cast<double>(clipped) / n};
}

}  // namespace strive
