#include "strive/self_check.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "strive/embedding_io.hpp"
#include "strive/policy.hpp"
#include "strive/rng.hpp"
#include "strive/simd/kernels.hpp"
#include "strive/variants.hpp"

namespace strive {

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;

RewardMatrix random_rewards(std::size_t g, std::size_t m, RandomStream& rng) {
  std::vector<double> values(g * m);
  const double kind = rng.uniform();
  for (double& v : values) {
    if (kind < 0.4) {
      v = rng.uniform() < 0.5 ? 1.0 : 0.0;  // binary accuracy
    } else if (kind < 0.5) {
      v = 0.5 + (rng.uniform() < 0.3 ? 1.0 : 0.0);  // accuracy plus format channel
    } else {
      v = rng.normal(0.0, 2.0);
    }
  }
  return RewardMatrix(g, m, std::move(values));
}

// Independent mean/std in long double, straight loops.
std::pair<long double, long double> oracle_moments(std::span<const double> xs) {
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / static_cast<long double>(xs.size());
  long double sq = 0.0L;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<long double>(xs.size()))};
}

CheckResult check_flattening(const JointAdvantageFn& joint, RandomStream rng) {
  CheckResult r{"flattening_equivalence", true, 0.0, 1e-12, ""};
  std::size_t cases = 0;
  while (cases < 1000) {
    const std::size_t g = rng.uniform_index(1, 6);
    const std::size_t m = rng.uniform_index(1, 6);
    if (g * m < 2) continue;
    ++cases;
    const RewardMatrix rewards = random_rewards(g, m, rng);
    const AdvantageMatrix got = joint(rewards, kDefaultStdGuard);
    const GroupAdvantages want = group_normalized_advantage(rewards.values.flat(), kDefaultStdGuard);
    if (got.zero_advantage_flag != want.zero_flag) r.measured = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < want.values.size(); ++k) {
      r.measured = std::max(r.measured, std::abs(got.values.flat()[k] - want.values[k]));
    }
  }
  r.passed = r.measured <= r.tolerance;
  r.detail = std::to_string(cases) + " matrices, G,M in 1..6";
  return r;
}

CheckResult check_normalization(const JointAdvantageFn& joint, RandomStream rng) {
  CheckResult r{"normalization", true, 0.0, 1e-9, ""};
  std::size_t checked = 0;
  for (int c = 0; c < 1000; ++c) {
    const std::size_t g = rng.uniform_index(1, 6);
    const std::size_t m = rng.uniform_index(2, 6);
    const RewardMatrix rewards = random_rewards(g, m, rng);
    const AdvantageMatrix adv = joint(rewards, kDefaultStdGuard);
    if (adv.zero_advantage_flag) continue;
    ++checked;
    const auto [mean, sd] = oracle_moments(adv.values.flat());
    r.measured = std::max({r.measured, static_cast<double>(std::abs(mean)), static_cast<double>(std::abs(sd - 1.0L))});
  }
  r.passed = r.measured <= r.tolerance && checked > 0;
  r.detail = std::to_string(checked) + " unguarded groups";
  return r;
}

CheckResult check_zero_variance_guard(const JointAdvantageFn& joint, RandomStream rng) {
  CheckResult r{"zero_variance_guard", true, 0.0, 0.0, ""};
  std::size_t fired = 0;
  constexpr int kCases = 1000;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t g = rng.uniform_index(1, 6);
    const std::size_t m = rng.uniform_index(2, 6);
    // Half the cases model the constant format channel: accuracy 0 or 1 for
    // every sample plus a shared lambda.
    const double accuracy = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const double format = c % 2 == 0 ? rng.uniform(0.0, 1.0) : 0.0;
    const RewardMatrix rewards(g, m, std::vector<double>(g * m, accuracy + format));
    const AdvantageMatrix adv = joint(rewards, kDefaultStdGuard);
    bool all_zero = true;
    for (double a : adv.values.flat()) {
      all_zero = all_zero && a == 0.0;
      r.measured = std::max(r.measured, std::abs(a));
    }
    if (adv.zero_advantage_flag && all_zero) ++fired;
  }
  r.passed = fired == kCases;
  r.detail = std::to_string(fired) + "/" + std::to_string(kCases) + " uniform groups zeroed and flagged";
  return r;
}

CheckResult check_shift_scale_invariance(RandomStream rng) {
  CheckResult r{"shift_scale_invariance", true, 0.0, 1e-9, ""};
  for (int c = 0; c < 500; ++c) {
    std::vector<double> x(rng.uniform_index(2, 24));
    for (double& v : x) v = rng.normal();
    const double shift = rng.uniform(-10.0, 10.0);
    const double scale = rng.uniform(0.1, 10.0);
    std::vector<double> shifted(x), scaled(x);
    for (double& v : shifted) v += shift;
    for (double& v : scaled) v *= scale;
    const auto base = group_normalized_advantage(x).values;
    const auto a = group_normalized_advantage(shifted).values;
    const auto b = group_normalized_advantage(scaled).values;
    const auto mo = mean_only_advantage(x);
    const auto mo_shift = mean_only_advantage(shifted);
    const auto mo_scale = mean_only_advantage(scaled);
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.measured = std::max({r.measured, std::abs(a[i] - base[i]), std::abs(b[i] - base[i]),
                             std::abs(mo_shift[i] - mo[i]), std::abs(mo_scale[i] - scale * mo[i])});
    }
  }
  r.passed = r.measured <= r.tolerance;
  return r;
}

// Draws a log-ratio that stays at least `margin` away from both clip edges so
// the objective is smooth within the finite-difference stencil.
double log_ratio_away_from_kinks(double epsilon, RandomStream& rng) {
  constexpr double margin = 1e-3;
  while (true) {
    const double lr = rng.uniform(-0.6, 0.6);
    const double ratio = std::exp(lr);
    if (std::abs(ratio - (1.0 - epsilon)) > margin && std::abs(ratio - (1.0 + epsilon)) > margin) return lr;
  }
}

CheckResult check_objective_gradient(RandomStream rng) {
  CheckResult r{"objective_gradient_fd", true, 0.0, 1e-4, ""};
  std::size_t clipped = 0, unclipped = 0;
  const int configs = 16;
  for (int c = 0; c < configs; ++c) {
    GroupConfig cfg;
    cfg.num_generations = rng.uniform_index(1, 4);
    cfg.num_variants = rng.uniform_index(1, 3);
    if (cfg.budget() < 2) cfg.num_generations = 2;
    cfg.kl_coeff = c % 2 == 0 ? 0.0 : 0.04;
    const std::size_t g = cfg.num_generations, m = cfg.num_variants;

    SampleLikelihoods l{Matrix(g, m), Matrix(g, m), Matrix(g, m)};
    AdvantageMatrix adv{Matrix(g, m), false};
    for (std::size_t k = 0; k < g * m; ++k) {
      const double old = -rng.uniform(0.1, 3.0);
      l.logprob_old.flat()[k] = old;
      l.logprob_current.flat()[k] = old + log_ratio_away_from_kinks(cfg.clip_epsilon, rng);
      l.logprob_ref.flat()[k] = -rng.uniform(0.1, 3.0);
      adv.values.flat()[k] = rng.normal();
      const double ratio = std::exp(l.logprob_current.flat()[k] - old);
      (unclipped_branch_active(ratio, adv.values.flat()[k], cfg.clip_epsilon) ? unclipped : clipped)++;
    }
    const Matrix analytic = objective_gradient_coefficients(l, adv, cfg);
    for (std::size_t k = 0; k < g * m; ++k) {
      SampleLikelihoods up = l, down = l;
      up.logprob_current.flat()[k] += kFiniteDifferenceStep;
      down.logprob_current.flat()[k] -= kFiniteDifferenceStep;
      const double numeric =
          (objective_value(up, adv, cfg) - objective_value(down, adv, cfg)) / (2.0 * kFiniteDifferenceStep);
      r.measured = std::max(r.measured, relative_error(analytic.flat()[k], numeric));
    }
  }
  r.passed = r.measured <= r.tolerance && clipped > 0 && unclipped > 0;
  r.detail = std::to_string(configs) + " configs, " + std::to_string(clipped) + " clipped / " +
             std::to_string(unclipped) + " unclipped samples";
  return r;
}

PolicyParams random_params(std::size_t a, std::size_t d, double scale, RandomStream& rng) {
  PolicyParams p = PolicyParams::zeros(a, d);
  for (double& w : p.weights.flat()) w = rng.normal(0.0, scale);
  return p;
}

CheckResult check_policy_gradient(RandomStream rng) {
  CheckResult r{"policy_gradient_fd", true, 0.0, 1e-4, ""};
  std::size_t clipped = 0, unclipped = 0;
  int instances = 0;
  while (instances < 12) {
    const std::size_t a = rng.uniform_index(2, 4);
    const std::size_t d = rng.uniform_index(1, 6);
    GroupConfig cfg;
    cfg.num_generations = rng.uniform_index(1, 3);
    cfg.num_variants = rng.uniform_index(1, 3);
    if (cfg.budget() < 2) cfg.num_generations = 2;
    cfg.kl_coeff = instances % 2 == 0 ? 0.0 : 0.04;
    const std::size_t g = cfg.num_generations, m = cfg.num_variants;

    const PolicyParams current = random_params(a, d, 0.8, rng);
    PolicyParams old = current;
    for (double& w : old.weights.flat()) w += rng.normal(0.0, 0.3);
    const PolicyParams ref = random_params(a, d, 0.5, rng);

    std::vector<std::vector<double>> features(m, std::vector<double>(d));
    for (auto& x : features) {
      for (double& v : x) v = rng.normal();
    }
    std::vector<std::size_t> answers(g * m);
    for (auto& ans : answers) ans = rng.uniform_index(0, a - 1);
    AdvantageMatrix adv{Matrix(g, m), false};
    for (double& v : adv.values.flat()) v = rng.normal();

    auto likelihoods = [&](const PolicyParams& w) {
      SampleLikelihoods l{Matrix(g, m), Matrix(g, m), Matrix(g, m)};
      for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t ans = answers[i * m + j];
          l.logprob_current(i, j) = logprob(w, features[j], ans);
          l.logprob_old(i, j) = logprob(old, features[j], ans);
          l.logprob_ref(i, j) = logprob(ref, features[j], ans);
        }
      }
      return l;
    };

    const SampleLikelihoods base = likelihoods(current);
    bool near_kink = false;
    for (std::size_t k = 0; k < g * m; ++k) {
      const double ratio = std::exp(base.logprob_current.flat()[k] - base.logprob_old.flat()[k]);
      if (std::abs(ratio - (1.0 - cfg.clip_epsilon)) < 1e-3 || std::abs(ratio - (1.0 + cfg.clip_epsilon)) < 1e-3) {
        near_kink = true;
      }
    }
    if (near_kink) continue;
    ++instances;
    for (std::size_t k = 0; k < g * m; ++k) {
      const double ratio = std::exp(base.logprob_current.flat()[k] - base.logprob_old.flat()[k]);
      (unclipped_branch_active(ratio, adv.values.flat()[k], cfg.clip_epsilon) ? unclipped : clipped)++;
    }

    const Matrix coeffs = objective_gradient_coefficients(base, adv, cfg);
    Matrix analytic(a, d, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const Matrix lg = logprob_gradient(current, features[j], answers[i * m + j]);
        simd::axpy(coeffs(i, j), lg.flat(), analytic.flat());
      }
    }
    for (std::size_t w = 0; w < a * d; ++w) {
      PolicyParams up = current, down = current;
      up.weights.flat()[w] += kFiniteDifferenceStep;
      down.weights.flat()[w] -= kFiniteDifferenceStep;
      const double numeric = (objective_value(likelihoods(up), adv, cfg) - objective_value(likelihoods(down), adv, cfg)) /
                             (2.0 * kFiniteDifferenceStep);
      r.measured = std::max(r.measured, relative_error(analytic.flat()[w], numeric, 1e-6));
    }
  }
  r.passed = r.measured <= r.tolerance && clipped > 0 && unclipped > 0;
  r.detail = std::to_string(instances) + " instances, " + std::to_string(clipped) + " clipped / " +
             std::to_string(unclipped) + " unclipped samples";
  return r;
}

CheckResult check_logprob_gradient(RandomStream rng) {
  CheckResult r{"logprob_gradient_fd", true, 0.0, 1e-5, ""};
  for (int c = 0; c < 20; ++c) {
    const std::size_t a = rng.uniform_index(2, 5);
    const std::size_t d = rng.uniform_index(1, 6);
    const PolicyParams p = random_params(a, d, 1.0, rng);
    std::vector<double> x(d);
    for (double& v : x) v = rng.normal();
    const std::size_t ans = rng.uniform_index(0, a - 1);
    const Matrix analytic = logprob_gradient(p, x, ans);
    for (std::size_t w = 0; w < a * d; ++w) {
      PolicyParams up = p, down = p;
      up.weights.flat()[w] += kFiniteDifferenceStep;
      down.weights.flat()[w] -= kFiniteDifferenceStep;
      const double numeric = (logprob(up, x, ans) - logprob(down, x, ans)) / (2.0 * kFiniteDifferenceStep);
      r.measured = std::max(r.measured, relative_error(analytic.flat()[w], numeric, 1e-6));
    }
  }
  r.passed = r.measured <= r.tolerance;
  return r;
}

CheckResult check_segment_sampling(RandomStream rng) {
  CheckResult r{"segment_sampling_frequencies", true, 0.0, 3.0, ""};
  constexpr int kDraws = 200000;
  for (int c = 0; c < 20; ++c) {
    std::vector<double> scores(rng.uniform_index(2, 6));
    for (double& s : scores) s = rng.uniform(-1.0, 1.0);
    const double tau = rng.uniform(0.1, 2.0);
    // Closed-form softmax, computed without the library.
    std::vector<double> p(scores.size());
    double z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) z += p[i] = std::exp(scores[i] / tau);
    for (double& v : p) v /= z;

    std::vector<int> counts(scores.size(), 0);
    RandomStream draws = rng.child(static_cast<std::uint64_t>(c));
    for (int n = 0; n < kDraws; ++n) ++counts[sample_segment_frame(scores, tau, draws)];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double freq = static_cast<double>(counts[i]) / kDraws;
      const double se = std::sqrt(p[i] * (1.0 - p[i]) / kDraws);
      r.measured = std::max(r.measured, std::abs(freq - p[i]) / se);
    }
  }
  r.passed = r.measured <= r.tolerance;
  r.detail = "max deviation in binomial standard errors, 20 configs x 200k draws";
  return r;
}

CheckResult check_low_temperature(RandomStream rng) {
  CheckResult r{"low_temperature_argmax", true, 0.0, 0.999, ""};
  const std::vector<double> scores{0.0, 10.0};
  int hits = 0;
  constexpr int kDraws = 10000;
  for (int n = 0; n < kDraws; ++n) hits += sample_segment_frame(scores, 0.01, rng) == 1 ? 1 : 0;
  r.measured = static_cast<double>(hits) / kDraws;
  r.passed = r.measured >= r.tolerance;
  r.detail = "argmax frequency at tau = 0.01";
  return r;
}

CheckResult check_softmax_shift(RandomStream rng) {
  CheckResult r{"softmax_shift_invariance", true, 0.0, 1e-12, ""};
  for (int c = 0; c < 200; ++c) {
    std::vector<double> scores(rng.uniform_index(1, 8));
    for (double& s : scores) s = rng.uniform(-1.0, 1.0);
    const double tau = rng.uniform(0.05, 2.0);
    const double shift = rng.uniform(-50.0, 50.0);
    std::vector<double> shifted(scores);
    for (double& s : shifted) s += shift;
    const auto p = segment_softmax(scores, tau);
    const auto q = segment_softmax(shifted, tau);
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      r.measured = std::max(r.measured, std::abs(p[i] - q[i]));
      total += p[i];
    }
    r.measured = std::max(r.measured, std::abs(total - 1.0));
  }
  r.passed = r.measured <= r.tolerance;
  return r;
}

CheckResult check_deterministic_coverage() {
  CheckResult r{"deterministic_coverage", true, 0.0, 0.0, ""};
  std::size_t failures = 0;
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t budget = 1; budget <= 16; ++budget) {
      const std::size_t frames = budget * m;
      std::vector<int> seen(frames, 0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t idx : deterministic_variant_indices(frames, budget, m, i).frame_indices) ++seen[idx];
      }
      for (int s : seen) failures += s == 1 ? 0 : 1;
    }
  }
  r.measured = static_cast<double>(failures);
  r.passed = failures == 0;
  r.detail = "frames covered != exactly once, F = budget * M, M in 1..4";
  return r;
}

CheckResult check_embedding_roundtrip(RandomStream rng) {
  CheckResult r{"embedding_roundtrip", true, 0.0, 0.0, ""};
  const std::size_t f = rng.uniform_index(1, 12), t = rng.uniform_index(1, 5), d = rng.uniform_index(1, 9);
  FrameEmbeddings frames{MatrixF(f, d)};
  QueryEmbedding query{MatrixF(t, d)};
  for (float& v : frames.vectors.flat()) v = static_cast<float>(rng.normal());
  for (float& v : query.token_vectors.flat()) v = static_cast<float>(rng.normal());
  frames.vectors(0, 0) = -0.0f;
  frames.vectors.flat().back() = std::numeric_limits<float>::denorm_min();
  const auto [f2, q2] = decode_embeddings(encode_embeddings(frames, query));
  std::size_t mismatched = 0;
  auto compare = [&](const MatrixF& a, const MatrixF& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      ++mismatched;
      return;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      mismatched += std::bit_cast<std::uint32_t>(a.flat()[k]) == std::bit_cast<std::uint32_t>(b.flat()[k]) ? 0 : 1;
    }
  };
  compare(frames.vectors, f2.vectors);
  compare(query.token_vectors, q2.token_vectors);
  r.measured = static_cast<double>(mismatched);
  r.passed = mismatched == 0;
  r.detail = "bitwise mismatches after encode/decode";
  return r;
}

CheckResult check_kl_nonnegative(RandomStream rng) {
  CheckResult r{"kl_nonnegative", true, 0.0, 0.0, ""};
  double worst = 0.0;
  for (int c = 0; c < 10000; ++c) {
    const double kl = kl_penalty(-rng.uniform(0.0, 20.0), -rng.uniform(0.0, 20.0));
    worst = std::min(worst, kl);
  }
  r.measured = -worst;
  r.passed = worst >= 0.0 && kl_penalty(-1.2, -1.2) == 0.0;
  return r;
}

CheckResult check_simd_equivalence(RandomStream rng) {
  CheckResult r{"simd_equivalence", true, 0.0, 1e-12, ""};
  const auto tables = simd::available_kernels();
  const simd::KernelTable& ref = simd::scalar_kernels();
  std::string names;
  for (const simd::KernelTable* t : tables) names += std::string(names.empty() ? "" : ",") + t->name;
  for (std::size_t n = 0; n <= 67; ++n) {
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.normal();
    for (double& v : y) v = rng.normal();
    const double a = rng.normal();
    for (const simd::KernelTable* t : tables) {
      auto rel = [](double p, double q) { return std::abs(p - q) / std::max(1.0, std::abs(q)); };
      r.measured = std::max(r.measured, rel(t->sum(x.data(), n), ref.sum(x.data(), n)));
      r.measured = std::max(r.measured, rel(t->dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n)));
      r.measured = std::max(r.measured, rel(t->squared_deviation_sum(x.data(), n, 0.3),
                                            ref.squared_deviation_sum(x.data(), n, 0.3)));
      if (n > 0) r.measured = std::max(r.measured, rel(t->max_value(x.data(), n), ref.max_value(x.data(), n)));
      std::vector<double> y1(y), y2(y);
      t->axpy(a, x.data(), y1.data(), n);
      ref.axpy(a, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) r.measured = std::max(r.measured, rel(y1[i], y2[i]));
    }
  }
  r.passed = r.measured <= r.tolerance;
  r.detail = "tables: " + names + " (active: " + simd::active_kernels().name + ")";
  return r;
}

AdvantageMatrix column_normalized(const RewardMatrix& rewards, double guard) {
  const Matrix& r = rewards.values;
  AdvantageMatrix out{Matrix(r.rows(), r.cols(), 0.0), true};
  if (r.rows() < 2) return joint_dual_group_advantage(rewards, guard);
  std::vector<double> column(r.rows());
  for (std::size_t j = 0; j < r.cols(); ++j) {
    for (std::size_t i = 0; i < r.rows(); ++i) column[i] = r(i, j);
    const GroupAdvantages g = group_normalized_advantage(column, guard);
    out.zero_advantage_flag = out.zero_advantage_flag && g.zero_flag;
    for (std::size_t i = 0; i < r.rows(); ++i) out.values(i, j) = g.values[i];
  }
  return out;
}

AdvantageMatrix sample_std(const RewardMatrix& rewards, double guard) {
  AdvantageMatrix out = joint_dual_group_advantage(rewards, guard);
  const double n = static_cast<double>(rewards.values.size());
  const double shrink = std::sqrt((n - 1.0) / n);
  for (double& a : out.values.flat()) a *= shrink;
  return out;
}

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

JointAdvantageFn faulty_joint_advantage(const std::string& name) {
  if (name == "column_normalized") return column_normalized;
  if (name == "sample_std") return sample_std;
  return {};
}

std::vector<std::string> faulty_joint_advantage_names() { return {"column_normalized", "sample_std"}; }

std::vector<CheckResult> run_self_checks(const CheckOptions& options) {
  const JointAdvantageFn joint =
      options.joint_advantage ? options.joint_advantage : JointAdvantageFn(joint_dual_group_advantage);
  const RandomStream root = RandomStream(options.seed).child("self-check");
  std::vector<CheckResult> out;
  out.push_back(check_flattening(joint, root.child("flattening")));
  out.push_back(check_normalization(joint, root.child("normalization")));
  out.push_back(check_zero_variance_guard(joint, root.child("guard")));
  out.push_back(check_shift_scale_invariance(root.child("invariance")));
  out.push_back(check_objective_gradient(root.child("objective-gradient")));
  out.push_back(check_policy_gradient(root.child("policy-gradient")));
  out.push_back(check_logprob_gradient(root.child("logprob-gradient")));
  out.push_back(check_segment_sampling(root.child("sampling")));
  out.push_back(check_low_temperature(root.child("low-temperature")));
  out.push_back(check_softmax_shift(root.child("softmax-shift")));
  out.push_back(check_deterministic_coverage());
  out.push_back(check_embedding_roundtrip(root.child("femb")));
  out.push_back(check_kl_nonnegative(root.child("kl")));
  out.push_back(check_simd_equivalence(root.child("simd")));
  return out;
}

bool print_check_report(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-30s measured=%.3e tol=%.3e", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.measured, r.tolerance);
    out << line;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
  return all;
}

}  // namespace strive
