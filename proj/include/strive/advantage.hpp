#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "strive/matrix.hpp"

namespace strive {

enum class AdvantageMode { grpo, dr_grpo, strive_joint };

std::string_view to_string(AdvantageMode mode) noexcept;
AdvantageMode parse_advantage_mode(std::string_view text);

inline constexpr double kDefaultStdGuard = 1e-6;
inline constexpr double kDefaultClipEpsilon = 0.2;
inline constexpr double kDefaultKlCoeff = 0.04;

struct GroupConfig {
  std::size_t num_generations = 4;  // G
  std::size_t num_variants = 2;     // M
  double clip_epsilon = kDefaultClipEpsilon;
  double kl_coeff = kDefaultKlCoeff;
  double std_guard = kDefaultStdGuard;
  AdvantageMode advantage_mode = AdvantageMode::strive_joint;

  // Rollouts per prompt per step.
  std::size_t budget() const noexcept { return num_generations * num_variants; }

  // Throws ConfigError. The single-variant restriction for grpo/dr_grpo is
  // enforced by the training harness, not here.
  void validate() const;
};

// Rewards for one prompt's rollout group: row i = generation, column j = variant.
struct RewardMatrix {
  Matrix values;

  RewardMatrix() = default;
  explicit RewardMatrix(Matrix m) : values(std::move(m)) {}
  RewardMatrix(std::size_t generations, std::size_t variants, std::vector<double> row_major)
      : values(generations, variants, std::move(row_major)) {}
};

struct AdvantageMatrix {
  Matrix values;
  // True iff the std guard fired and every entry was set to exactly zero.
  bool zero_advantage_flag = false;
};

struct GroupAdvantages {
  std::vector<double> values;
  bool zero_flag = false;
};

// Per-sample sequence log-probabilities under the current, behaviour (old)
// and reference policies. All three share the G x M shape of the rewards.
struct SampleLikelihoods {
  Matrix logprob_current;
  Matrix logprob_old;
  Matrix logprob_ref;
};

struct PopulationStats {
  double mean = 0.0;
  double stddev = 0.0;  // divides by N
};

PopulationStats population_stats(std::span<const double> values);

// (r - mean) / std over the group, with std the population standard
// deviation. When std < guard every advantage is 0 and zero_flag is set.
GroupAdvantages group_normalized_advantage(std::span<const double> rewards, double guard = kDefaultStdGuard);

// r - mean, no scale normalization.
std::vector<double> mean_only_advantage(std::span<const double> rewards);

// Normalizes over the whole G x M pool. Identical to
// group_normalized_advantage on the row-major flattening.
AdvantageMatrix joint_dual_group_advantage(const RewardMatrix& rewards, double guard = kDefaultStdGuard);

// k3 estimator rho - log(rho) - 1 with rho = pi_ref / pi_current.
double kl_penalty(double logprob_current, double logprob_ref);

// d kl_penalty / d logprob_current = 1 - rho.
double kl_penalty_gradient(double logprob_current, double logprob_ref);

double clipped_surrogate_term(double ratio, double advantage, double epsilon);

// True when min() picks ratio * A. Ties go to the unclipped branch.
bool unclipped_branch_active(double ratio, double advantage, double epsilon);

// Mean clipped surrogate minus kl_coeff * mean k3 penalty over all samples.
double objective_value(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                       const GroupConfig& config);

// dJ / d logprob_current for every sample, scaled by the same 1/N as
// objective_value. The clipped branch contributes zero.
Matrix objective_gradient_coefficients(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                                       const GroupConfig& config);

struct ObjectiveDiagnostics {
  double surrogate_mean = 0.0;
  double kl_mean = 0.0;
  double clip_fraction = 0.0;  // samples where the clipped branch is strictly smaller
};

ObjectiveDiagnostics objective_diagnostics(const SampleLikelihoods& likelihoods, const AdvantageMatrix& advantages,
                                           const GroupConfig& config);

}  // namespace strive
