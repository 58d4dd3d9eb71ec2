#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "strive/matrix.hpp"
#include "strive/rng.hpp"
#include "strive/scoring.hpp"
#include "strive/variants.hpp"

namespace strive {

// Synthetic video-QA generator. A few evidence frames carry the answer's
// signal direction; every other frame is noise. Selecting frames that miss
// the evidence leaves the policy guessing, which is what makes text-only
// groups saturate.
struct EnvConfig {
  std::size_t num_frames = 64;            // F
  std::size_t feature_dim = 8;            // D_feat
  std::size_t num_answers = 4;            // A
  std::size_t num_evidence_frames = 4;    // E
  double evidence_signal_strength = 2.0;
  double noise_std = 0.5;
  double format_reward_weight = 0.0;      // constant reward channel
  double accuracy_weight = 1.0;
  std::size_t embedding_dim = 16;         // width of the scoring embeddings
  std::size_t query_tokens = 4;
  double embedding_noise_std = 0.25;

  void validate() const;  // throws ConfigError
};

struct Episode {
  Matrix frame_features;                   // F x D_feat
  std::vector<std::size_t> evidence_indices;  // sorted, distinct
  std::size_t correct_answer = 0;
  FrameEmbeddings frame_embeddings;        // F x embedding_dim
  QueryEmbedding query;                    // query_tokens x embedding_dim
};

// Unit signal direction for an answer: the basis vector e_a when
// D_feat >= A, otherwise a fixed pseudo-random direction.
std::vector<double> answer_direction(const EnvConfig& config, std::size_t answer);

Episode generate_episode(const EnvConfig& config, const RandomStream& rng);

double compute_reward(const Episode& episode, std::size_t answer, const EnvConfig& config);

// Fraction of variants whose frame set meets at least one evidence frame.
double evidence_hit_rate(std::span<const VariantSpec> variants, const Episode& episode);

}  // namespace strive
