#include "strive/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "strive/errors.hpp"
#include "strive/scoring.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

namespace {

struct RolloutSample {
  std::size_t variant = 0;
  std::size_t answer = 0;
};

void append_fixed6(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace

void RunConfig::validate() const {
  group.validate();
  env.validate();
  if (group.num_variants > 1 &&
      (group.advantage_mode == AdvantageMode::grpo || group.advantage_mode == AdvantageMode::dr_grpo)) {
    throw ConfigError("group.M", std::string(to_string(group.advantage_mode)) +
                                     " compares generations of a single view; it requires M = 1, got M = " +
                                     std::to_string(group.num_variants));
  }
  if (group.budget() < 2) throw ConfigError("group.G", "G * M must be at least 2 to form an advantage group");
  if (steps < 1) throw ConfigError("steps", "must be >= 1");
  if (budget < 1) throw ConfigError("budget", "must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate", "must be >= 0");
  if (!(ema_alpha > 0.0 && ema_alpha <= 1.0)) throw ConfigError("ema_alpha", "must lie in (0, 1]");
  if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (eval_interval < 1) throw ConfigError("eval_interval", "must be >= 1");
  if (eval_episodes < 1) throw ConfigError("eval_episodes", "must be >= 1");
  switch (variant_mode) {
    case VariantMode::importance:
      if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau", "must be > 0 in importance mode");
      break;
    case VariantMode::stochastic:
      if (env.num_frames < budget) {
        throw ConfigError("budget", "budget-infeasible: " + std::to_string(env.num_frames) +
                                        " frames cannot supply a budget of " + std::to_string(budget));
      }
      break;
    case VariantMode::deterministic: {
      const std::size_t m = group.num_variants;
      const std::size_t stride = std::max(m, env.num_frames / budget);
      if ((m - 1) + (budget - 1) * stride > env.num_frames - 1) {
        throw ConfigError("budget", "budget-infeasible: " + std::to_string(m) + " disjoint strided variants of " +
                                        std::to_string(budget) + " frames do not fit in " +
                                        std::to_string(env.num_frames) + " frames");
      }
      break;
    }
  }
}

std::vector<VariantSpec> build_variants(const RunConfig& config, const Episode& episode, const RandomStream& stream) {
  const std::size_t frames = episode.frame_features.rows();
  const std::size_t m = config.group.num_variants;
  std::vector<VariantSpec> out;
  switch (config.variant_mode) {
    case VariantMode::deterministic:
      for (std::size_t j = 0; j < m; ++j) out.push_back(deterministic_variant_indices(frames, config.budget, m, j));
      break;
    case VariantMode::stochastic: {
      StochasticOptions options;
      options.window_length = config.stochastic_window;
      for (std::size_t j = 0; j < m; ++j) {
        RandomStream rng = stream.child(j);
        VariantSpec spec = stochastic_variant_spec(frames, config.budget, rng, options);
        spec.variant_id = j;
        out.push_back(std::move(spec));
      }
      return out;  // stochastic views always carry augmentation
    }
    case VariantMode::importance: {
      const FrameScores scores = score_frames(episode.frame_embeddings, episode.query);
      out = importance_variant_indices(scores.scores, config.budget, config.tau, m, stream);
      break;
    }
  }
  if (config.attach_augment) {
    for (VariantSpec& v : out) {
      RandomStream rng = stream.child(v.variant_id).child("augment-params");
      v.augment = AugmentParams::sample(rng);
    }
  }
  return out;
}

AdvantageMatrix compute_group_advantages(const RewardMatrix& rewards, const GroupConfig& config) {
  const Matrix& r = rewards.values;
  switch (config.advantage_mode) {
    case AdvantageMode::strive_joint:
      return joint_dual_group_advantage(rewards, config.std_guard);
    case AdvantageMode::grpo:
    case AdvantageMode::dr_grpo: {
      // Each variant column is its own group; with M = 1 that is the whole pool.
      AdvantageMatrix out{Matrix(r.rows(), r.cols(), 0.0), false};
      std::vector<double> column(r.rows());
      bool all_flagged = true;
      for (std::size_t j = 0; j < r.cols(); ++j) {
        for (std::size_t i = 0; i < r.rows(); ++i) column[i] = r(i, j);
        std::vector<double> adv;
        bool flagged = false;
        if (config.advantage_mode == AdvantageMode::grpo) {
          GroupAdvantages g = group_normalized_advantage(column, config.std_guard);
          adv = std::move(g.values);
          flagged = g.zero_flag;
        } else {
          adv = mean_only_advantage(column);
          flagged = population_stats(column).stddev < config.std_guard;
        }
        all_flagged = all_flagged && flagged;
        for (std::size_t i = 0; i < r.rows(); ++i) out.values(i, j) = adv[i];
      }
      out.zero_advantage_flag = all_flagged;
      return out;
    }
  }
  throw ConfigError("group.advantage_mode", "unknown mode");
}

TrainingResult run_training(const RunConfig& config) {
  config.validate();
  const std::size_t g_count = config.group.num_generations;
  const std::size_t m_count = config.group.num_variants;
  const std::size_t pool = g_count * m_count;

  TrainingResult result;
  PolicyParams policy = PolicyParams::zeros(config.env.num_answers, config.env.feature_dim);
  const PolicySnapshot reference(policy, SnapshotRole::ref);

  const RandomStream master(config.seed);
  const RandomStream train_stream = master.child("train");
  const RandomStream eval_stream = master.child("eval");

  if (config.variant_mode == VariantMode::importance && config.env.num_frames < config.budget) {
    result.warnings.push_back(partition_segments(config.env.num_frames, config.budget).warning.value_or(""));
  }

  double eval_accuracy = 0.0;
  for (std::size_t step = 0; step < config.steps; ++step) {
    // Single inner epoch: the behaviour policy is the current one.
    const PolicySnapshot old(policy, SnapshotRole::old);
    const RandomStream step_stream = train_stream.child(step);

    Matrix gradient(policy.num_answers(), policy.feature_dim(), 0.0);
    std::vector<double> step_rewards;
    step_rewards.reserve(config.batch_size * pool);
    std::size_t flagged_groups = 0;
    std::size_t rollouts = 0;
    double kl_sum = 0.0;
    double clip_sum = 0.0;

    for (std::size_t e = 0; e < config.batch_size; ++e) {
      const RandomStream ep_stream = step_stream.child(e);
      const Episode episode = generate_episode(config.env, ep_stream.child("episode"));
      const std::vector<VariantSpec> variants = build_variants(config, episode, ep_stream.child("variants"));

      std::vector<std::vector<double>> features(m_count);
      std::vector<RolloutSample> samples(pool);
      RewardMatrix rewards(Matrix(g_count, m_count, 0.0));
      SampleLikelihoods likelihoods{Matrix(g_count, m_count), Matrix(g_count, m_count), Matrix(g_count, m_count)};

      for (std::size_t j = 0; j < m_count; ++j) {
        features[j] = aggregate_features(episode.frame_features, variants[j], ep_stream.child("features").child(j));
        const std::vector<double> dist = answer_distribution(old.params(), features[j]);
        for (std::size_t i = 0; i < g_count; ++i) {
          RandomStream rng = ep_stream.child("answers").child(j).child(i);
          const std::size_t answer = sample_answer(dist, rng);
          samples[i * m_count + j] = {j, answer};
          rewards.values(i, j) = compute_reward(episode, answer, config.env);
          likelihoods.logprob_current(i, j) = logprob(policy, features[j], answer);
          likelihoods.logprob_old(i, j) = logprob(old.params(), features[j], answer);
          likelihoods.logprob_ref(i, j) = logprob(reference.params(), features[j], answer);
          ++rollouts;
        }
      }

      const AdvantageMatrix advantages = compute_group_advantages(rewards, config.group);
      if (population_stats(rewards.values.flat()).stddev < config.group.std_guard) ++flagged_groups;
      step_rewards.insert(step_rewards.end(), rewards.values.flat().begin(), rewards.values.flat().end());

      const Matrix coeffs = objective_gradient_coefficients(likelihoods, advantages, config.group);
      const ObjectiveDiagnostics diag = objective_diagnostics(likelihoods, advantages, config.group);
      kl_sum += diag.kl_mean;
      clip_sum += diag.clip_fraction;

      // Batch objective is the mean of per-prompt objectives.
      const double scale = 1.0 / static_cast<double>(config.batch_size);
      for (std::size_t k = 0; k < pool; ++k) {
        const double c = coeffs.flat()[k];
        if (c == 0.0) continue;
        const Matrix g = logprob_gradient(policy, features[samples[k].variant], samples[k].answer);
        simd::axpy(scale * c, g.flat(), gradient.flat());
      }

      if (config.record_groups) {
        result.groups.push_back({step, e, rewards.values, advantages.zero_advantage_flag});
      }
    }

    if (rollouts != config.batch_size * pool) throw Error("rollout accounting mismatch");
    result.rollouts_per_step.push_back(rollouts);
    result.total_rollouts += rollouts;

    const double grad_norm = std::sqrt(simd::dot(gradient.flat(), gradient.flat()));
    try {
      policy = apply_update(policy, gradient, config.learning_rate);
    } catch (const UpdateRejectedError& err) {
      ++result.rejected_updates;
      result.warnings.push_back("step " + std::to_string(step) + ": " + err.what());
    }

    if (step % config.eval_interval == 0) {
      eval_accuracy = evaluate_policy(policy, config.env, config.eval_episodes, eval_stream);
    }

    const PopulationStats stats = population_stats(step_rewards);
    const double batch = static_cast<double>(config.batch_size);
    result.rows.push_back({step, stats.mean, stats.stddev, static_cast<double>(flagged_groups) / batch, grad_norm,
                           kl_sum / batch, clip_sum / batch, eval_accuracy});
  }
  result.final_params = std::move(policy);

  if (!config.metrics_path.empty()) write_text_file(config.metrics_path, format_metrics_csv(result.rows));
  if (!config.smoothed_metrics_path.empty()) {
    write_text_file(config.smoothed_metrics_path, format_smoothed_metrics_csv(result.rows, config.ema_alpha));
  }
  return result;
}

std::vector<double> ema_smooth(std::span<const double> series, double alpha) {
  if (series.empty()) throw InvalidValueError("ema_smooth: empty series");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidValueError("ema_smooth: alpha must lie in (0, 1]");
  std::vector<double> out(series.size());
  out[0] = series[0];
  for (std::size_t t = 1; t < series.size(); ++t) out[t] = alpha * series[t] + (1.0 - alpha) * out[t - 1];
  return out;
}

double evaluate_policy(const PolicyParams& params, const EnvConfig& env, std::size_t num_episodes,
                       const RandomStream& stream) {
  if (num_episodes < 1) throw InvalidValueError("evaluate_policy: need at least one episode");
  std::size_t correct = 0;
  VariantSpec full_view;
  full_view.frame_indices.resize(env.num_frames);
  for (std::size_t f = 0; f < env.num_frames; ++f) full_view.frame_indices[f] = f;
  for (std::size_t k = 0; k < num_episodes; ++k) {
    const Episode episode = generate_episode(env, stream.child(k));
    const std::vector<double> features = aggregate_features(episode.frame_features, full_view, stream);
    if (argmax(answer_logits(params, features)) == episode.correct_answer) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(num_episodes);
}

std::string format_metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.step);
    for (double v : {r.reward_mean, r.reward_std, r.zero_adv_frac, r.grad_norm, r.kl, r.clip_frac, r.eval_accuracy}) {
      out += ',';
      append_fixed6(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string format_smoothed_metrics_csv(std::span<const MetricsRow> rows, double alpha) {
  std::string out = "step,reward_std_ema,zero_adv_frac_ema,grad_norm_ema,kl_ema,eval_accuracy_ema\n";
  if (rows.empty()) return out;
  auto column = [&](double MetricsRow::*field) {
    std::vector<double> xs;
    xs.reserve(rows.size());
    for (const MetricsRow& r : rows) xs.push_back(r.*field);
    return ema_smooth(xs, alpha);
  };
  const auto std_ema = column(&MetricsRow::reward_std);
  const auto zero_ema = column(&MetricsRow::zero_adv_frac);
  const auto grad_ema = column(&MetricsRow::grad_norm);
  const auto kl_ema = column(&MetricsRow::kl);
  const auto eval_ema = column(&MetricsRow::eval_accuracy);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    out += std::to_string(rows[t].step);
    for (double v : {std_ema[t], zero_ema[t], grad_ema[t], kl_ema[t], eval_ema[t]}) {
      out += ',';
      append_fixed6(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw Error("short write to " + path);
}

}  // namespace strive
