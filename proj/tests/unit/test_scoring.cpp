#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "strive/embedding_io.hpp"
#include "strive/errors.hpp"
#include "strive/rng.hpp"
#include "strive/scoring.hpp"

using namespace strive;

namespace {

// Hand-rolled little-endian writer, independent of the library encoder.
void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f32(std::vector<std::uint8_t>& b, float f) { put_u32(b, std::bit_cast<std::uint32_t>(f)); }

std::vector<std::uint8_t> femb(std::uint32_t f, std::uint32_t t, std::uint32_t d, const std::vector<float>& frames,
                               const std::vector<float>& tokens) {
  std::vector<std::uint8_t> b{'F', 'E', 'M', 'B'};
  put_u32(b, 1);
  put_u32(b, f);
  put_u32(b, t);
  put_u32(b, d);
  for (float x : frames) put_f32(b, x);
  for (float x : tokens) put_f32(b, x);
  return b;
}

MatrixF make(std::size_t r, std::size_t c, std::vector<float> v) { return MatrixF(r, c, std::move(v)); }

// Brute-force cosine against the pooled query, double precision throughout.
std::vector<double> oracle_scores(const MatrixF& frames, const MatrixF& tokens) {
  const std::size_t d = frames.cols();
  std::vector<double> q(d, 0.0);
  for (std::size_t t = 0; t < tokens.rows(); ++t) {
    for (std::size_t k = 0; k < d; ++k) q[k] += tokens(t, k);
  }
  double qn = 0;
  for (double x : q) qn += x * x;
  qn = std::sqrt(qn);
  std::vector<double> out;
  for (std::size_t f = 0; f < frames.rows(); ++f) {
    double dot = 0, fn = 0;
    for (std::size_t k = 0; k < d; ++k) {
      dot += frames(f, k) * q[k];
      fn += double(frames(f, k)) * frames(f, k);
    }
    out.push_back(dot / (std::sqrt(fn) * qn));
  }
  return out;
}

}  // namespace

TEST_CASE("l2 normalize") {
  const auto a = l2_normalize(std::vector<double>{3, 4});
  CHECK(a.values[0] == doctest::Approx(0.6));
  CHECK(a.values[1] == doctest::Approx(0.8));
  CHECK_FALSE(a.degenerate);
  const auto b = l2_normalize(a.values);
  CHECK(b.values[0] == doctest::Approx(0.6).epsilon(1e-15));
  const auto z = l2_normalize(std::vector<double>{0, 0});
  CHECK(z.degenerate);
  CHECK(z.values == std::vector<double>{0, 0});
}

TEST_CASE("aligned and orthogonal frames") {
  const FrameEmbeddings frames{make(3, 2, {2, 0, 0, 5, 0, 0})};
  const QueryEmbedding query{make(2, 2, {1, 0, 3, 0})};
  const auto s = score_frames(frames, query).scores;
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(0.0));
  CHECK(s[2] == 0.0);  // zero-norm frame
}

TEST_CASE("zero pooled query scores everything 0") {
  const FrameEmbeddings frames{make(2, 2, {1, 0, 0, 1})};
  const QueryEmbedding query{make(2, 2, {1, 1, -1, -1})};
  for (double s : score_frames(frames, query).scores) CHECK(s == 0.0);
}

TEST_CASE("width mismatch") {
  CHECK_THROWS_AS(score_frames(FrameEmbeddings{make(1, 3, {1, 2, 3})}, QueryEmbedding{make(1, 2, {1, 2})}), ShapeError);
}

TEST_CASE("random instance against the brute-force oracle") {
  RandomStream rng(41);
  for (int c = 0; c < 20; ++c) {
    MatrixF f(5, 4), t(3, 4);
    for (float& x : f.flat()) x = static_cast<float>(rng.normal());
    for (float& x : t.flat()) x = static_cast<float>(rng.normal());
    const auto got = score_frames(FrameEmbeddings{f}, QueryEmbedding{t}).scores;
    const auto want = oracle_scores(f, t);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9);
  }
}

TEST_CASE("property: scale invariance and token permutation") {
  RandomStream rng(42);
  for (int c = 0; c < 50; ++c) {
    const std::size_t nf = rng.uniform_index(1, 8), nt = rng.uniform_index(1, 5), d = rng.uniform_index(1, 10);
    // Small integers keep the rescaled float inputs exact, so any drift
    // comes from the scorer.
    MatrixF f(nf, d), t(nt, d);
    for (float& x : f.flat()) x = static_cast<float>(rng.uniform_index(0, 16)) - 8.0f;
    for (float& x : t.flat()) x = static_cast<float>(rng.uniform_index(0, 16)) - 8.0f;
    const auto base = score_frames(FrameEmbeddings{f}, QueryEmbedding{t}).scores;

    MatrixF f2 = f, t2 = t;
    const std::size_t row = rng.uniform_index(0, nf - 1);
    for (float& x : f2.row(row)) x *= 7.0f;
    for (float& x : t2.flat()) x *= 0.375f;
    const auto scaled = score_frames(FrameEmbeddings{f2}, QueryEmbedding{t2}).scores;

    MatrixF t3(nt, d);
    for (std::size_t r = 0; r < nt; ++r) {
      for (std::size_t k = 0; k < d; ++k) t3(r, k) = t(nt - 1 - r, k);
    }
    const auto permuted = score_frames(FrameEmbeddings{f}, QueryEmbedding{t3}).scores;
    for (std::size_t i = 0; i < nf; ++i) {
      CHECK(std::abs(scaled[i] - base[i]) <= 1e-9);
      CHECK(std::abs(permuted[i] - base[i]) <= 1e-9);
      CHECK(base[i] >= -1.0);
      CHECK(base[i] <= 1.0);
    }
  }
}

TEST_CASE("FEMB encoding matches the byte layout") {
  const std::vector<float> fv{1, 2, 3, 4, 5, 6}, tv{-1, 0.5f, 0};
  const auto bytes = encode_embeddings(FrameEmbeddings{make(2, 3, fv)}, QueryEmbedding{make(1, 3, tv)});
  CHECK(bytes == femb(2, 1, 3, fv, tv));
  CHECK(bytes.size() == 20 + 4 * 9);
}

TEST_CASE("FEMB round trip through a file") {
  const auto path = std::filesystem::temp_directory_path() / "strive_test_roundtrip.femb";
  const FrameEmbeddings f{make(2, 3, {1.5f, -2.25f, 3, 4, 5, -0.0f})};
  const QueryEmbedding q{make(1, 3, {std::numeric_limits<float>::denorm_min(), 0.5f, 1e30f})};
  write_embedding_file(path, f, q);
  const auto [f2, q2] = read_embedding_file(path);
  REQUIRE(f2.vectors.rows() == 2);
  REQUIRE(q2.token_vectors.rows() == 1);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(std::bit_cast<std::uint32_t>(f2.vectors.flat()[k]) == std::bit_cast<std::uint32_t>(f.vectors.flat()[k]));
  }
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::bit_cast<std::uint32_t>(q2.token_vectors.flat()[k]) ==
          std::bit_cast<std::uint32_t>(q.token_vectors.flat()[k]));
  }
  std::filesystem::remove(path);
}

TEST_CASE("FEMB parse errors") {
  const auto good = femb(2, 1, 3, {1, 2, 3, 4, 5, 6}, {7, 8, 9});

  auto expect = [](const std::vector<std::uint8_t>& b, ParseErrorKind kind, std::size_t offset) {
    try {
      decode_embeddings(b);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.kind() == kind);
      CHECK(e.offset() == offset);
      CHECK(std::string(e.what()).find("offset " + std::to_string(offset)) != std::string::npos);
    }
  };

  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect(bad_magic, ParseErrorKind::bad_magic, 0);

  auto bad_version = good;
  bad_version[4] = 2;
  expect(bad_version, ParseErrorKind::version_mismatch, 4);

  // Cut in the middle of the third frame float: header 20 + 2.5 floats.
  const std::size_t cut = 20 + 10;
  const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + cut);
  expect(truncated, ParseErrorKind::truncated, cut);
  try {
    decode_embeddings(truncated);
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(std::to_string(good.size())) != std::string::npos);
    CHECK(msg.find(std::to_string(cut)) != std::string::npos);
  }

  expect(std::vector<std::uint8_t>(good.begin(), good.begin() + 10), ParseErrorKind::truncated, 10);

  auto trailing = good;
  trailing.push_back(0);
  expect(trailing, ParseErrorKind::dimension_inconsistent, good.size());

  expect(femb(0, 1, 3, {}, {1, 2, 3}), ParseErrorKind::dimension_inconsistent, 8);
  expect(femb(1, 0, 3, {1, 2, 3}, {}), ParseErrorKind::dimension_inconsistent, 12);
  expect(femb(1, 1, 0, {}, {}), ParseErrorKind::dimension_inconsistent, 16);

  CHECK_THROWS_AS(read_embedding_file("/nonexistent/path.femb"), ParseError);
}
