#pragma once

#include <span>
#include <vector>

#include "strive/matrix.hpp"

namespace strive {

// Pooled per-frame visual embeddings, F x D.
struct FrameEmbeddings {
  MatrixF vectors;
};

// Query token embeddings, T x D.
struct QueryEmbedding {
  MatrixF token_vectors;
};

struct FrameScores {
  std::vector<double> scores;  // one per frame, each in [-1, 1]
};

struct NormalizedVector {
  std::vector<double> values;
  bool degenerate = false;  // input had zero norm; values are all zero
};

NormalizedVector l2_normalize(std::span<const double> v);

// Unit mean-pooled query direction: tokens are averaged, then normalized.
NormalizedVector pooled_query_direction(const QueryEmbedding& query);

// s_f = <normalize(frame_f), normalize(mean(tokens))>. Zero-norm frames or a
// zero-norm pooled query score 0. Throws ShapeError on a width mismatch.
FrameScores score_frames(const FrameEmbeddings& frames, const QueryEmbedding& query);

}  // namespace strive
