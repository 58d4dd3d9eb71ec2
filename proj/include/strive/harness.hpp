#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strive/advantage.hpp"
#include "strive/env.hpp"
#include "strive/policy.hpp"
#include "strive/variants.hpp"

namespace strive {

struct RunConfig {
  GroupConfig group;
  VariantMode variant_mode = VariantMode::importance;
  double tau = 0.4;
  std::size_t budget = 16;
  std::size_t steps = 500;
  double learning_rate = 2.0;
  std::uint64_t seed = 0;
  EnvConfig env;
  double ema_alpha = 0.1;
  std::string metrics_path;           // empty: no file
  std::string smoothed_metrics_path;  // empty: no file

  std::size_t batch_size = 4;         // prompts (episodes) per step
  std::size_t eval_interval = 10;
  std::size_t eval_episodes = 200;
  bool attach_augment = false;        // augmentation for deterministic/importance variants
  std::optional<std::size_t> stochastic_window;
  bool record_groups = false;         // keep per-group rewards in the result

  // Throws ConfigError naming the offending field. Rejects grpo/dr_grpo with
  // more than one variant.
  void validate() const;
};

// Per-step diagnostics; one row per training step.
struct MetricsRow {
  std::size_t step = 0;
  double reward_mean = 0.0;
  double reward_std = 0.0;     // population std over every reward of the step
  double zero_adv_frac = 0.0;  // share of prompt groups whose std guard fired
  double grad_norm = 0.0;      // L2 norm of the full parameter gradient
  double kl = 0.0;             // mean k3 estimate against the reference policy
  double clip_frac = 0.0;
  double eval_accuracy = 0.0;  // latest held-out greedy accuracy
};

struct GroupRecord {
  std::size_t step = 0;
  std::size_t episode = 0;
  Matrix rewards;  // G x M
  bool zero_flag = false;
};

struct TrainingResult {
  std::vector<MetricsRow> rows;
  std::vector<std::size_t> rollouts_per_step;
  std::size_t total_rollouts = 0;
  std::size_t rejected_updates = 0;
  std::vector<GroupRecord> groups;  // filled when RunConfig::record_groups
  std::vector<std::string> warnings;
  PolicyParams final_params;
};

// The M views of one episode for the configured variant mode. Variant j draws
// from stream.child(j) (importance mode: stream.child(j).child(segment)).
std::vector<VariantSpec> build_variants(const RunConfig& config, const Episode& episode, const RandomStream& stream);

// Advantages for one prompt group under config.advantage_mode: per-variant
// column normalization (grpo), per-variant centring (dr_grpo) or joint
// normalization over the whole pool (strive_joint).
AdvantageMatrix compute_group_advantages(const RewardMatrix& rewards, const GroupConfig& config);

TrainingResult run_training(const RunConfig& config);

// y_0 = x_0, y_t = alpha * x_t + (1 - alpha) * y_{t-1}.
std::vector<double> ema_smooth(std::span<const double> series, double alpha);

// Greedy (argmax, lowest index on ties) accuracy over held-out episodes
// k = 0..num_episodes-1 drawn from stream.child(k). The policy reads the
// mean of every frame.
double evaluate_policy(const PolicyParams& params, const EnvConfig& env, std::size_t num_episodes,
                       const RandomStream& stream);

inline constexpr const char* kMetricsHeader = "step,reward_mean,reward_std,zero_adv_frac,grad_norm,kl,clip_frac,eval_accuracy";

std::string format_metrics_csv(std::span<const MetricsRow> rows);
std::string format_smoothed_metrics_csv(std::span<const MetricsRow> rows, double alpha);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace strive
