#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "strive/errors.hpp"
#include "strive/variants.hpp"

using namespace strive;

namespace {

using Indices = std::vector<std::size_t>;

bool strictly_increasing(const Indices& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("deterministic stride examples") {
  CHECK(deterministic_variant_indices(8, 4, 2, 0).frame_indices == Indices{0, 2, 4, 6});
  CHECK(deterministic_variant_indices(8, 4, 2, 1).frame_indices == Indices{1, 3, 5, 7});
  CHECK(deterministic_variant_indices(4, 4, 1, 0).frame_indices == Indices{0, 1, 2, 3});

  Indices want;
  for (std::size_t j = 0; j < 16; ++j) want.push_back(1 + 4 * j);
  CHECK(deterministic_variant_indices(64, 16, 2, 1).frame_indices == want);
  CHECK(want.back() == 61);
}

TEST_CASE("deterministic errors") {
  CHECK_THROWS_AS(deterministic_variant_indices(8, 4, 2, 2), IndexError);
  CHECK_THROWS_AS(deterministic_variant_indices(8, 5, 2, 1), BudgetInfeasibleError);
  try {
    deterministic_variant_indices(4, 16, 1, 0);
    FAIL("expected throw");
  } catch (const BudgetInfeasibleError& e) {
    CHECK(std::string(e.what()).find("budget-infeasible") != std::string::npos);
  }
}

TEST_CASE("property: deterministic variants tile F = budget x M") {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t budget = 1; budget <= 12; ++budget) {
      const std::size_t f = budget * m;
      std::vector<int> seen(f, 0);
      for (std::size_t i = 0; i < m; ++i) {
        const auto idx = deterministic_variant_indices(f, budget, m, i).frame_indices;
        CHECK(idx.size() == budget);
        CHECK(strictly_increasing(idx));
        for (auto t : idx) ++seen[t];
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    }
  }
}

TEST_CASE("property: deterministic variants are disjoint when F > budget x M") {
  for (std::size_t f = 8; f <= 70; f += 7) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const std::size_t budget = f / (2 * m);
      if (budget == 0) continue;
      std::set<std::size_t> all;
      std::size_t total = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto idx = deterministic_variant_indices(f, budget, m, i).frame_indices;
        total += idx.size();
        all.insert(idx.begin(), idx.end());
      }
      CHECK(all.size() == total);
    }
  }
}

TEST_CASE("segment partition") {
  using B = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(partition_segments(10, 4).bounds == B{{0, 2}, {3, 5}, {6, 7}, {8, 9}});
  const auto p = partition_segments(3, 5);
  CHECK(p.bounds == B{{0, 0}, {1, 1}, {2, 2}});
  CHECK(p.warning.has_value());
  CHECK_FALSE(partition_segments(10, 4).warning.has_value());

  // 64 frames into the 16-frame budget: sixteen segments of four.
  const auto q = partition_segments(64, 16);
  REQUIRE(q.bounds.size() == 16);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(q.bounds[k].first == 4 * k);
    CHECK(q.bounds[k].second == 4 * k + 3);
  }
  CHECK_THROWS_AS(partition_segments(0, 4), InvalidSegmentError);
  CHECK_THROWS_AS(partition_segments(4, 0), InvalidSegmentError);
}

TEST_CASE("segment softmax") {
  const std::vector<double> s{0.2, 0.4, 0.8};
  const auto p = segment_softmax(s, 0.4);
  double z = std::exp(0.5) + std::exp(1.0) + std::exp(2.0);
  CHECK(p[0] == doctest::Approx(std::exp(0.5) / z).epsilon(1e-13));
  CHECK(p[1] == doctest::Approx(std::exp(1.0) / z).epsilon(1e-13));
  CHECK(p[2] == doctest::Approx(std::exp(2.0) / z).epsilon(1e-13));

  CHECK_THROWS_AS(segment_softmax(s, 0.0), InvalidTemperatureError);
  CHECK_THROWS_AS(segment_softmax(s, -1.0), InvalidTemperatureError);
  CHECK_THROWS_AS(segment_softmax(std::vector<double>{}, 1.0), InvalidSegmentError);
  // Large scores do not overflow.
  const auto big = segment_softmax(std::vector<double>{1000.0, 1000.0}, 0.01);
  CHECK(big[0] == doctest::Approx(0.5));
}

TEST_CASE("property: softmax shift invariance") {
  RandomStream rng(21);
  for (int c = 0; c < 200; ++c) {
    std::vector<double> s(rng.uniform_index(1, 9));
    for (double& x : s) x = rng.uniform(-1, 1);
    const double tau = rng.uniform(0.05, 3), shift = rng.uniform(-20, 20);
    auto t = s;
    for (double& x : t) x += shift;
    const auto p = segment_softmax(s, tau), q = segment_softmax(t, tau);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(p[i] - q[i]) <= 1e-12);
  }
}

TEST_CASE("uniform scores sample uniformly") {
  RandomStream rng(22);
  std::vector<int> counts(3, 0);
  const std::vector<double> s{0.5, 0.5, 0.5};
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[sample_segment_frame(s, 0.7, rng)];
  for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("closed-form softmax frequencies within 3 standard errors") {
  RandomStream rng(23);
  const std::vector<double> s{0.2, 0.4, 0.8};
  const double z = std::exp(0.2 / 0.4) + std::exp(0.4 / 0.4) + std::exp(0.8 / 0.4);
  const std::vector<double> p{std::exp(0.5) / z, std::exp(1.0) / z, std::exp(2.0) / z};
  std::vector<int> counts(3, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[sample_segment_frame(s, 0.4, rng)];
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / n);
    CHECK(std::abs(counts[i] / double(n) - p[i]) <= 3 * se);
  }
}

TEST_CASE("low temperature picks the argmax") {
  RandomStream rng(24);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += sample_segment_frame(std::vector<double>{0.0, 10.0}, 0.01, rng) == 1;
  CHECK(hits >= 9990);
}

TEST_CASE("importance variants") {
  const RandomStream rng(25);
  SUBCASE("singleton segments") {
    std::vector<double> s{0.3, -0.2, 0.9, 0.1, 0.0};
    for (double tau : {0.01, 0.4, 5.0}) {
      for (const auto& v : importance_variant_indices(s, 5, tau, 3, rng)) {
        CHECK(v.frame_indices == Indices{0, 1, 2, 3, 4});
      }
    }
  }
  SUBCASE("exploitation limit") {
    std::vector<double> s{0.1, 0.9, 0.3, 0.2, 0.7, 0.8, 0.0, 0.4};
    for (const auto& v : importance_variant_indices(s, 4, 1e-4, 3, rng)) {
      CHECK(v.frame_indices == Indices{1, 2, 5, 7});
    }
  }
  SUBCASE("replay") {
    std::vector<double> s{0.1, 0.5, 0.3, 0.2, 0.7, 0.6, 0.0, 0.4};
    const auto a = importance_variant_indices(s, 4, 0.4, 2, rng);
    const auto b = importance_variant_indices(s, 4, 0.4, 2, RandomStream(25));
    CHECK(a == b);
    for (const auto& v : a) {
      CHECK(v.frame_indices.size() == 4);
      CHECK(strictly_increasing(v.frame_indices));
    }
    CHECK(a[0].variant_id == 0);
    CHECK(a[1].variant_id == 1);
  }
  SUBCASE("budget above frame count is clamped") {
    std::vector<double> s{0.1, 0.5, 0.3};
    const auto v = importance_variant_indices(s, 16, 0.4, 2, rng);
    CHECK(v[0].frame_indices == Indices{0, 1, 2});
  }
}

TEST_CASE("property: importance variants are strictly increasing, one per segment") {
  RandomStream rng(26);
  for (int c = 0; c < 100; ++c) {
    std::vector<double> s(rng.uniform_index(1, 70));
    for (double& x : s) x = rng.uniform(-1, 1);
    const std::size_t k = rng.uniform_index(1, 20);
    const auto part = partition_segments(s.size(), k);
    for (const auto& v : importance_variant_indices(s, k, rng.uniform(0.05, 2), 3, rng.child(c))) {
      REQUIRE(v.frame_indices.size() == part.bounds.size());
      CHECK(strictly_increasing(v.frame_indices));
      for (std::size_t j = 0; j < part.bounds.size(); ++j) {
        CHECK(v.frame_indices[j] >= part.bounds[j].first);
        CHECK(v.frame_indices[j] <= part.bounds[j].second);
      }
    }
  }
}

TEST_CASE("stochastic variants") {
  SUBCASE("full-length crop when F == budget") {
    RandomStream rng(27);
    for (int c = 0; c < 20; ++c) {
      const auto v = stochastic_variant_spec(12, 12, rng);
      Indices all(12);
      for (std::size_t i = 0; i < 12; ++i) all[i] = i;
      CHECK(v.frame_indices == all);
      REQUIRE(v.augment.has_value());
      CHECK(v.augment->within_range());
    }
  }
  SUBCASE("replay") {
    RandomStream a(28), b(28);
    CHECK(stochastic_variant_spec(64, 16, a) == stochastic_variant_spec(64, 16, b));
  }
  SUBCASE("infeasible budget") {
    RandomStream rng(29);
    CHECK_THROWS_AS(stochastic_variant_spec(4, 16, rng), BudgetInfeasibleError);
  }
  SUBCASE("fixed window length") {
    RandomStream rng(30);
    for (int c = 0; c < 200; ++c) {
      const auto v = stochastic_variant_spec(64, 16, rng, StochasticOptions{32});
      CHECK(v.frame_indices.back() - v.frame_indices.front() == 31);
    }
  }
}

TEST_CASE("property: stochastic indices stay inside a crop and increase") {
  RandomStream rng(31);
  for (int c = 0; c < 500; ++c) {
    const std::size_t f = rng.uniform_index(1, 80);
    const std::size_t budget = rng.uniform_index(1, f);
    const auto v = stochastic_variant_spec(f, budget, rng);
    CHECK(v.frame_indices.size() == budget);
    CHECK(strictly_increasing(v.frame_indices));
    CHECK(v.frame_indices.back() < f);
  }
}

TEST_CASE("stochastic crop windows are uniform over feasible windows") {
  // F = 5, budget = 3: windows (start, length) number 3 + 2 + 1 = 6.
  RandomStream rng(32);
  std::vector<int> counts(36, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto v = stochastic_variant_spec(5, 3, rng);
    ++counts[v.frame_indices.front() * 6 + v.frame_indices.back()];
  }
  int windows = 0;
  for (int c : counts) {
    if (c == 0) continue;
    ++windows;
    const double p = 1.0 / 6.0, se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(c / double(n) - p) <= 4 * se);
  }
  CHECK(windows == 6);
}

TEST_CASE("stride rounding inside a crop") {
  // Length 7 window, budget 3: positions 0, 3, 6. Length 6, budget 4:
  // j * 5 / 3 = 0, 1.67, 3.33, 5 -> 0, 2, 3, 5.
  RandomStream rng(33);
  const auto a = stochastic_variant_spec(7, 3, rng, StochasticOptions{7});
  CHECK(a.frame_indices == Indices{0, 3, 6});
  const auto b = stochastic_variant_spec(6, 4, rng, StochasticOptions{6});
  CHECK(b.frame_indices == Indices{0, 2, 3, 5});
}

TEST_CASE("augmentation parameter ranges") {
  RandomStream rng(34);
  double jitter_sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto a = AugmentParams::sample(rng);
    CHECK(a.within_range());
    CHECK(std::abs(a.color_jitter) <= 0.4);
    CHECK(std::abs(a.rotation_deg) <= 5.0);
    CHECK(std::abs(a.translate_frac) <= 0.05);
    CHECK(a.scale >= 0.95);
    CHECK(a.scale <= 1.05);
    jitter_sum += a.color_jitter;
  }
  CHECK(std::abs(jitter_sum / n) <= 0.01);
  CHECK(AugmentParams{}.strength() == 0.0);
  CHECK(AugmentParams{0.4, -5.0, 0.05, 0.95}.strength() == doctest::Approx(1.0));
}

TEST_CASE("variant mode names") {
  for (auto m : {VariantMode::deterministic, VariantMode::stochastic, VariantMode::importance}) {
    CHECK(parse_variant_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_variant_mode("random"), ConfigError);
}
