#include "strive/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "strive/errors.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

namespace {

constexpr std::uint64_t kAnswerDirectionSeed = 0x5EED'D1EC'7104'0001ULL;

std::vector<std::size_t> sample_distinct(std::size_t population, std::size_t count, RandomStream& rng) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i, population - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void EnvConfig::validate() const {
  if (num_frames < 1) throw ConfigError("env.num_frames", "must be >= 1");
  if (feature_dim < 1) throw ConfigError("env.feature_dim", "must be >= 1");
  if (num_answers < 2) throw ConfigError("env.num_answers", "must be >= 2");
  if (num_evidence_frames < 1 || num_evidence_frames > num_frames) {
    throw ConfigError("env.num_evidence_frames", "must lie in [1, num_frames]");
  }
  if (!(evidence_signal_strength > 0.0)) throw ConfigError("env.evidence_signal_strength", "must be > 0");
  if (!(noise_std >= 0.0)) throw ConfigError("env.noise_std", "must be >= 0");
  if (!(format_reward_weight >= 0.0)) throw ConfigError("env.format_reward_weight", "must be >= 0");
  if (!std::isfinite(accuracy_weight)) throw ConfigError("env.accuracy_weight", "must be finite");
  if (embedding_dim < 1) throw ConfigError("env.embedding_dim", "must be >= 1");
  if (query_tokens < 1) throw ConfigError("env.query_tokens", "must be >= 1");
  if (!(embedding_noise_std >= 0.0)) throw ConfigError("env.embedding_noise_std", "must be >= 0");
}

std::vector<double> answer_direction(const EnvConfig& config, std::size_t answer) {
  std::vector<double> dir(config.feature_dim, 0.0);
  if (config.feature_dim >= config.num_answers) {
    dir[answer] = 1.0;
    return dir;
  }
  RandomStream rng = RandomStream(kAnswerDirectionSeed).child(config.feature_dim).child(answer);
  double norm2 = 0.0;
  while (!(norm2 > 0.0)) {
    for (double& d : dir) d = rng.normal();
    norm2 = simd::dot(dir, dir);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& d : dir) d *= inv;
  return dir;
}

Episode generate_episode(const EnvConfig& config, const RandomStream& rng) {
  Episode ep;
  RandomStream answer_rng = rng.child("answer");
  RandomStream evidence_rng = rng.child("evidence");
  RandomStream feature_rng = rng.child("features");
  RandomStream embed_rng = rng.child("embeddings");

  ep.correct_answer = static_cast<std::size_t>(answer_rng.uniform_index(0, config.num_answers - 1));
  ep.evidence_indices = sample_distinct(config.num_frames, config.num_evidence_frames, evidence_rng);

  const std::vector<double> signal = answer_direction(config, ep.correct_answer);
  ep.frame_features = Matrix(config.num_frames, config.feature_dim, 0.0);
  for (std::size_t f = 0; f < config.num_frames; ++f) {
    auto row = ep.frame_features.row(f);
    if (config.noise_std > 0.0) {
      for (double& x : row) x = feature_rng.normal(0.0, config.noise_std);
    }
  }
  for (std::size_t f : ep.evidence_indices) {
    simd::axpy(config.evidence_signal_strength, signal, ep.frame_features.row(f));
  }

  // Scoring embeddings: a unit query direction; evidence frames lie along it,
  // other frames are isotropic noise. Expected cosine is larger for evidence.
  const std::size_t dim = config.embedding_dim;
  std::vector<double> query_dir(dim);
  double norm2 = 0.0;
  while (!(norm2 > 0.0)) {
    for (double& q : query_dir) q = embed_rng.normal();
    norm2 = simd::dot(query_dir, query_dir);
  }
  for (double& q : query_dir) q /= std::sqrt(norm2);

  const double sigma = config.embedding_noise_std;
  MatrixF tokens(config.query_tokens, dim);
  for (std::size_t t = 0; t < config.query_tokens; ++t) {
    for (std::size_t d = 0; d < dim; ++d) {
      tokens(t, d) = static_cast<float>(query_dir[d] + (sigma > 0.0 ? embed_rng.normal(0.0, sigma) : 0.0));
    }
  }
  ep.query.token_vectors = std::move(tokens);

  MatrixF frames(config.num_frames, dim);
  std::size_t next_evidence = 0;
  for (std::size_t f = 0; f < config.num_frames; ++f) {
    const bool is_evidence = next_evidence < ep.evidence_indices.size() && ep.evidence_indices[next_evidence] == f;
    if (is_evidence) ++next_evidence;
    for (std::size_t d = 0; d < dim; ++d) {
      // Background frames get unit-scale noise so their direction is random.
      const double sd = is_evidence ? sigma : 1.0;
      const double noise = sd > 0.0 ? embed_rng.normal(0.0, sd) : 0.0;
      frames(f, d) = static_cast<float>((is_evidence ? query_dir[d] : 0.0) + noise);
    }
  }
  ep.frame_embeddings.vectors = std::move(frames);
  return ep;
}

double compute_reward(const Episode& episode, std::size_t answer, const EnvConfig& config) {
  if (answer >= config.num_answers) {
    throw IndexError("answer " + std::to_string(answer) + " outside [0, " + std::to_string(config.num_answers - 1) +
                     "]");
  }
  const double accuracy = answer == episode.correct_answer ? 1.0 : 0.0;
  return config.accuracy_weight * accuracy + config.format_reward_weight;
}

double evidence_hit_rate(std::span<const VariantSpec> variants, const Episode& episode) {
  if (variants.empty()) return 0.0;
  const std::size_t num_frames = episode.frame_features.rows();
  std::size_t hits = 0;
  for (const VariantSpec& v : variants) {
    bool hit = false;
    for (std::size_t idx : v.frame_indices) {
      if (idx >= num_frames) throw IndexError("variant frame index " + std::to_string(idx) + " out of range");
      hit = hit || std::binary_search(episode.evidence_indices.begin(), episode.evidence_indices.end(), idx);
    }
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(variants.size());
}

}  // namespace strive
