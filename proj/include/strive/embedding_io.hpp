#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "strive/scoring.hpp"

// Embedding interchange file, little-endian:
//
//   offset  size      field
//   0       4         magic "FEMB"
//   4       4         version (u32) = 1
//   8       4         F (u32), frame count
//   12      4         T (u32), query token count
//   16      4         D (u32), embedding width
//   20      4*F*D     frame vectors, f32, frame-major
//   ...     4*T*D     token vectors, f32, token-major
//
// Files must be exactly this long; trailing bytes are rejected.

namespace strive {

inline constexpr std::uint32_t kEmbeddingFileVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 20;

using EmbeddingPair = std::pair<FrameEmbeddings, QueryEmbedding>;

std::vector<std::uint8_t> encode_embeddings(const FrameEmbeddings& frames, const QueryEmbedding& query);
EmbeddingPair decode_embeddings(std::span<const std::uint8_t> bytes);

EmbeddingPair read_embedding_file(const std::filesystem::path& path);
void write_embedding_file(const std::filesystem::path& path, const FrameEmbeddings& frames,
                          const QueryEmbedding& query);

}  // namespace strive
