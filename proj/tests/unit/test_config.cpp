#include <doctest.h>

#include <string>

#include "strive/config.hpp"
#include "strive/errors.hpp"

using namespace strive;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const RunConfig c = parse_run_config(R"({"group": {"G": 4, "M": 2}, "steps": 10})");
  CHECK(c.group.num_generations == 4);
  CHECK(c.group.num_variants == 2);
  CHECK(c.steps == 10);
  CHECK(c.tau == 0.4);
  CHECK(c.group.kl_coeff == 0.04);
  CHECK(c.budget == 16);
  CHECK(c.env.num_frames == 64);
  CHECK(c.variant_mode == VariantMode::importance);
  CHECK(c.group.advantage_mode == AdvantageMode::strive_joint);
}

TEST_CASE("every section parses") {
  const RunConfig c = parse_run_config(R"({
    "group": {"G": 8, "M": 1, "clip_epsilon": 0.3, "kl_coeff": 0.0, "std_guard": 1e-5, "advantage_mode": "grpo"},
    "variant_mode": "stochastic", "tau": 0.7, "budget": 8, "steps": 3, "learning_rate": 0.25,
    "seed": 18446744073709551615, "ema_alpha": 0.5, "metrics_path": "m.csv",
    "smoothed_metrics_path": "s.csv", "batch_size": 2, "eval_interval": 5, "eval_episodes": 9,
    "attach_augment": true, "stochastic_window": 32,
    "env": {"num_frames": 32, "feature_dim": 6, "num_answers": 3, "num_evidence_frames": 2,
            "evidence_signal_strength": 1.5, "noise_std": 0.1, "format_reward_weight": 0.5,
            "accuracy_weight": 2.0, "embedding_dim": 8, "query_tokens": 2, "embedding_noise_std": 0.3}
  })");
  CHECK(c.group.advantage_mode == AdvantageMode::grpo);
  CHECK(c.group.clip_epsilon == 0.3);
  CHECK(c.variant_mode == VariantMode::stochastic);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.attach_augment);
  CHECK(c.stochastic_window == 32u);
  CHECK(c.env.num_answers == 3);
  CHECK(c.env.embedding_noise_std == 0.3);
  CHECK(c.metrics_path == "m.csv");
}

TEST_CASE("dump and re-parse is stable") {
  const RunConfig c = parse_run_config(R"({"group": {"G": 2, "M": 4}, "steps": 5, "seed": 3})");
  const std::string text = dump_run_config(c);
  CHECK(dump_run_config(parse_run_config(text)) == text);
}

TEST_CASE("errors name the field") {
  CHECK(field_of(R"({"group": {"M": 2}, "steps": 1})") == "group.G");
  CHECK(field_of(R"({"group": {"G": 2}, "steps": 1})") == "group.M");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}})") == "steps");
  CHECK(field_of(R"({"steps": 1})") == "group");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}, "steps": 1, "stepz": 2})") == "stepz");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1, "N": 1}, "steps": 1})") == "group.N");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}, "steps": 1, "env": {"frames": 3}})") == "env.frames");
  CHECK(field_of(R"({"group": {"G": "four", "M": 1}, "steps": 1})") == "group.G");
  CHECK(field_of(R"({"group": {"G": -4, "M": 1}, "steps": 1})") == "group.G");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}, "steps": 1, "tau": "hot"})") == "tau");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}, "steps": 1, "variant_mode": "random"})") == "variant_mode");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1, "advantage_mode": "ppo"}, "steps": 1})") == "group.advantage_mode");
  CHECK(field_of(R"({"group": {"G": 2, "M": 1}, "steps": 1, "attach_augment": 1})") == "attach_augment");
  CHECK(field_of(R"({"group": [1], "steps": 1})") == "group");
  CHECK(field_of("{not json") == "<root>");
}

TEST_CASE("type errors mention the expected type") {
  try {
    parse_run_config(R"({"group": {"G": "four", "M": 1}, "steps": 1})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("integer") != std::string::npos);
  }
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.json"), ConfigError);
}
