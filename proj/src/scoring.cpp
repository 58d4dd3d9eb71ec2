#include "strive/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strive/errors.hpp"
#include "strive/simd/kernels.hpp"

namespace strive {

namespace {

std::vector<double> widen(std::span<const float> row) { return {row.begin(), row.end()}; }

}  // namespace

NormalizedVector l2_normalize(std::span<const double> v) {
  NormalizedVector out;
  out.values.assign(v.begin(), v.end());
  const double norm = std::sqrt(simd::dot(v, v));
  if (!(norm > 0.0)) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    out.degenerate = true;
    return out;
  }
  const double inv = 1.0 / norm;
  for (double& x : out.values) x *= inv;
  return out;
}

NormalizedVector pooled_query_direction(const QueryEmbedding& query) {
  const MatrixF& tokens = query.token_vectors;
  if (tokens.rows() < 1 || tokens.cols() < 1) throw ShapeError("query embedding needs T >= 1 and D >= 1");
  std::vector<double> mean(tokens.cols(), 0.0);
  for (std::size_t t = 0; t < tokens.rows(); ++t) {
    const std::vector<double> row = widen(tokens.row(t));
    simd::axpy(1.0, row, mean);
  }
  const double inv_t = 1.0 / static_cast<double>(tokens.rows());
  for (double& x : mean) x *= inv_t;
  return l2_normalize(mean);
}

FrameScores score_frames(const FrameEmbeddings& frames, const QueryEmbedding& query) {
  const MatrixF& f = frames.vectors;
  if (f.rows() < 1 || f.cols() < 1) throw ShapeError("frame embeddings need F >= 1 and D >= 1");
  if (f.cols() != query.token_vectors.cols()) {
    throw ShapeError("embedding width mismatch: frames have D=" + std::to_string(f.cols()) + ", query has D=" +
                     std::to_string(query.token_vectors.cols()));
  }
  const NormalizedVector q = pooled_query_direction(query);
  FrameScores out;
  out.scores.resize(f.rows(), 0.0);
  if (q.degenerate) return out;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const NormalizedVector z = l2_normalize(widen(f.row(i)));
    if (z.degenerate) continue;
    out.scores[i] = std::clamp(simd::dot(z.values, q.values), -1.0, 1.0);
  }
  return out;
}

}  // namespace strive
