#include "strive/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "strive/config.hpp"
#include "strive/embedding_io.hpp"
#include "strive/errors.hpp"
#include "strive/harness.hpp"
#include "strive/rng.hpp"
#include "strive/scoring.hpp"
#include "strive/self_check.hpp"
#include "strive/variants.hpp"

namespace strive {

namespace {

std::optional<std::uint64_t> seed_from_env() {
  const char* text = std::getenv("STRIVE_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0') throw ConfigError("STRIVE_SEED", "expected an unsigned integer");
  return static_cast<std::uint64_t>(v);
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  return flag ? flag : seed_from_env();
}

void print_indices(const VariantSpec& spec, std::ostream& out) {
  for (std::size_t k = 0; k < spec.frame_indices.size(); ++k) {
    if (k > 0) out << ' ';
    out << spec.frame_indices[k];
  }
  out << '\n';
}

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_run_config(a.config_path);
  if (const auto seed = resolve_seed(a.seed)) cfg.seed = *seed;
  if (!a.out_path.empty()) cfg.metrics_path = a.out_path;
  if (cfg.metrics_path.empty()) cfg.metrics_path = "metrics.csv";
  const TrainingResult result = run_training(cfg);
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  const MetricsRow& last = result.rows.back();
  char line[256];
  std::snprintf(line, sizeof line, "steps=%zu rollouts=%zu reward_mean=%.6f eval_accuracy=%.6f metrics=%s\n",
                result.rows.size(), result.total_rollouts, last.reward_mean, last.eval_accuracy,
                cfg.metrics_path.c_str());
  out << line;
  return 0;
}

struct VariantArgs {
  std::string mode = "deterministic";
  std::optional<std::size_t> frames;
  std::string embeddings;
  std::size_t budget = 16;
  std::size_t variants = 2;
  double tau = 0.4;
  std::optional<std::size_t> window;
  std::optional<std::uint64_t> seed;
};

int cmd_variants(const VariantArgs& a, std::ostream& out) {
  const VariantMode mode = parse_variant_mode(a.mode);
  const RandomStream root(resolve_seed(a.seed).value_or(0));
  if (a.variants == 0) throw ConfigError("variants", "must be at least 1");

  if (mode == VariantMode::importance) {
    if (a.embeddings.empty()) throw ConfigError("embeddings", "importance mode needs an embedding file");
    const auto [frames, query] = read_embedding_file(a.embeddings);
    const FrameScores scores = score_frames(frames, query);
    for (const VariantSpec& v : importance_variant_indices(scores.scores, a.budget, a.tau, a.variants, root)) {
      print_indices(v, out);
    }
    return 0;
  }

  std::size_t num_frames = 0;
  if (a.frames) {
    num_frames = *a.frames;
  } else if (!a.embeddings.empty()) {
    num_frames = read_embedding_file(a.embeddings).first.vectors.rows();
  } else {
    throw ConfigError("frames", "give --frames or --embeddings");
  }

  for (std::size_t j = 0; j < a.variants; ++j) {
    if (mode == VariantMode::deterministic) {
      print_indices(deterministic_variant_indices(num_frames, a.budget, a.variants, j), out);
    } else {
      RandomStream stream = root.child(j);
      print_indices(stochastic_variant_spec(num_frames, a.budget, stream, StochasticOptions{a.window}), out);
    }
  }
  return 0;
}

int cmd_score(const std::string& path, std::ostream& out) {
  const auto [frames, query] = read_embedding_file(path);
  const FrameScores scores = score_frames(frames, query);
  char line[64];
  for (double s : scores.scores) {
    std::snprintf(line, sizeof line, "%.6f\n", s);
    out << line;
  }
  return 0;
}

struct CheckArgs {
  std::optional<std::uint64_t> seed;
  std::string fault;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  CheckOptions options;
  if (const auto seed = resolve_seed(a.seed)) options.seed = *seed;
  if (!a.fault.empty()) {
    options.joint_advantage = faulty_joint_advantage(a.fault);
    if (!options.joint_advantage) throw ConfigError("inject-fault", "unknown fault '" + a.fault + "'");
    err << "note: running with injected fault '" << a.fault << "'\n";
  }
  return print_check_report(run_self_checks(options), out) ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-group policy optimization laboratory", "strive"};
  app.require_subcommand(1, 1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Train on the synthetic environment and write a metrics CSV");
  run->add_option("config", run_args.config_path, "JSON run configuration")->required();
  run->add_option("--seed", run_args.seed, "Override the configured seed");
  run->add_option("--out", run_args.out_path, "Override metrics_path");

  VariantArgs var_args;
  CLI::App* variants = app.add_subcommand("variants", "Print frame indices for M variants, one line each");
  variants->add_option("--mode", var_args.mode, "deterministic | stochastic | importance")->capture_default_str();
  variants->add_option("--frames", var_args.frames, "Number of frames F");
  variants->add_option("--embeddings", var_args.embeddings, "FEMB file (required for importance mode)");
  variants->add_option("--budget", var_args.budget, "Frames per variant")->capture_default_str();
  variants->add_option("--variants", var_args.variants, "Number of variants M")->capture_default_str();
  variants->add_option("--tau", var_args.tau, "Sampling temperature")->capture_default_str();
  variants->add_option("--window", var_args.window, "Fixed crop window length (stochastic)");
  variants->add_option("--seed", var_args.seed, "Random seed");

  std::string score_path;
  CLI::App* score = app.add_subcommand("score", "Print per-frame relevance scores for a FEMB file");
  score->add_option("file", score_path, "FEMB file")->required();

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "Run the invariant self-check suite");
  check->add_option("--seed", check_args.seed, "Random seed");
  check->add_option("--inject-fault", check_args.fault, "Swap in a faulty joint advantage (column_normalized, sample_std)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return cmd_run(run_args, out, err);
    if (*variants) return cmd_variants(var_args, out);
    if (*score) return cmd_score(score_path, out);
    if (*check) return cmd_check(check_args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace strive
