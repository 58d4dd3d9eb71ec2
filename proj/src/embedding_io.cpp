#include "strive/embedding_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "strive/errors.hpp"

namespace strive {

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'E', 'M', 'B'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

void put_matrix(std::vector<std::uint8_t>& out, const MatrixF& m) {
  for (float f : m.flat()) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

MatrixF get_matrix(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t rows, std::size_t cols) {
  std::vector<float> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::bit_cast<float>(get_u32(bytes, offset + 4 * i));
  return MatrixF(rows, cols, std::move(data));
}

std::uint32_t checked_dim(std::size_t value, const char* what) {
  if (value < 1 || value > UINT32_MAX) {
    throw ShapeError(std::string("embedding ") + what + " must be in [1, 2^32-1], got " + std::to_string(value));
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

std::vector<std::uint8_t> encode_embeddings(const FrameEmbeddings& frames, const QueryEmbedding& query) {
  const MatrixF& f = frames.vectors;
  const MatrixF& q = query.token_vectors;
  if (f.cols() != q.cols()) throw ShapeError("frame and query embeddings must share the embedding width");
  const std::uint32_t num_frames = checked_dim(f.rows(), "frame count");
  const std::uint32_t num_tokens = checked_dim(q.rows(), "token count");
  const std::uint32_t width = checked_dim(f.cols(), "width");

  std::vector<std::uint8_t> out;
  out.reserve(kEmbeddingHeaderBytes + 4 * (f.size() + q.size()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kEmbeddingFileVersion);
  put_u32(out, num_frames);
  put_u32(out, num_tokens);
  put_u32(out, width);
  put_matrix(out, f);
  put_matrix(out, q);
  return out;
}

EmbeddingPair decode_embeddings(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError(ParseErrorKind::bad_magic, 0, "magic mismatch: expected \"FEMB\"");
  }
  if (bytes.size() < kEmbeddingHeaderBytes) {
    throw ParseError(ParseErrorKind::truncated, bytes.size(),
                     "truncated header: expected " + std::to_string(kEmbeddingHeaderBytes) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kEmbeddingFileVersion) {
    throw ParseError(ParseErrorKind::version_mismatch, 4,
                     "unsupported version " + std::to_string(version) + ", expected " +
                         std::to_string(kEmbeddingFileVersion));
  }
  const std::uint64_t num_frames = get_u32(bytes, 8);
  const std::uint64_t num_tokens = get_u32(bytes, 12);
  const std::uint64_t width = get_u32(bytes, 16);
  if (num_frames == 0) throw ParseError(ParseErrorKind::dimension_inconsistent, 8, "frame count F is zero");
  if (num_tokens == 0) throw ParseError(ParseErrorKind::dimension_inconsistent, 12, "token count T is zero");
  if (width == 0) throw ParseError(ParseErrorKind::dimension_inconsistent, 16, "embedding width D is zero");

  const std::uint64_t expected = kEmbeddingHeaderBytes + 4 * (num_frames * width + num_tokens * width);
  if (bytes.size() < expected) {
    throw ParseError(ParseErrorKind::truncated, bytes.size(),
                     "truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw ParseError(ParseErrorKind::dimension_inconsistent, expected,
                     "payload longer than F/T/D imply: expected " + std::to_string(expected) + " bytes, got " +
                         std::to_string(bytes.size()));
  }

  const std::size_t frames_offset = kEmbeddingHeaderBytes;
  const std::size_t tokens_offset = frames_offset + 4 * num_frames * width;
  return {FrameEmbeddings{get_matrix(bytes, frames_offset, num_frames, width)},
          QueryEmbedding{get_matrix(bytes, tokens_offset, num_tokens, width)}};
}

EmbeddingPair read_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseErrorKind::io, 0, "cannot open embedding file " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_embeddings(bytes);
}

void write_embedding_file(const std::filesystem::path& path, const FrameEmbeddings& frames,
                          const QueryEmbedding& query) {
  const std::vector<std::uint8_t> bytes = encode_embeddings(frames, query);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(ParseErrorKind::io, 0, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError(ParseErrorKind::io, bytes.size(), "short write to " + path.string());
}

}  // namespace strive
