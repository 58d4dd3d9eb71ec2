#include "strive/config.hpp"

#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <string>

#include <json.hpp>

#include "strive/errors.hpp"

namespace strive {

namespace {

using json = nlohmann::json;

// Reads typed fields out of one JSON object, tracking the dotted path for
// error messages and rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& node, std::string prefix) : node_(node), prefix_(std::move(prefix)) {
    if (!node_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) {
    for (const char* k : keys) known_.insert(k);
  }

  void reject_unknown() const {
    for (const auto& [key, _] : node_.items()) {
      if (!known_.contains(key)) throw ConfigError(path(key.c_str()), "unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

  Section section(const char* key) const { return Section(node_.at(key), path(key)); }

  void require(const char* key) const {
    if (!node_.contains(key)) throw ConfigError(path(key), "missing required field");
  }

  void read(const char* key, std::size_t& out) const {
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) {
      if (v.is_number_integer() && v.get<long long>() >= 0) {
        out = v.get<std::size_t>();
        return;
      }
      throw ConfigError(path(key), "expected a non-negative integer");
    }
    out = v.get<std::size_t>();
  }

  void read_u64(const char* key, std::uint64_t& out) const {
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(path(key), "expected a non-negative 64-bit integer");
    out = v.get<std::uint64_t>();
  }

  void read(const char* key, double& out) const {
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    out = v.get<double>();
  }

  void read(const char* key, bool& out) const {
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected a boolean");
    out = v.get<bool>();
  }

  void read(const char* key, std::string& out) const {
    if (!node_.contains(key)) return;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    out = v.get<std::string>();
  }

  std::string path(const char* key) const { return prefix_.empty() ? std::string(key) : prefix_ + "." + key; }

 private:
  const json& node_;
  std::string prefix_;
  std::set<std::string> known_;
};

void read_group(const Section& s, GroupConfig& g) {
  Section sec = s;
  sec.allow({"G", "M", "clip_epsilon", "kl_coeff", "std_guard", "advantage_mode"});
  sec.reject_unknown();
  sec.require("G");
  sec.require("M");
  sec.read("G", g.num_generations);
  sec.read("M", g.num_variants);
  sec.read("clip_epsilon", g.clip_epsilon);
  sec.read("kl_coeff", g.kl_coeff);
  sec.read("std_guard", g.std_guard);
  std::string mode(to_string(g.advantage_mode));
  sec.read("advantage_mode", mode);
  g.advantage_mode = parse_advantage_mode(mode);
}

void read_env(const Section& s, EnvConfig& e) {
  Section sec = s;
  sec.allow({"num_frames", "feature_dim", "num_answers", "num_evidence_frames", "evidence_signal_strength",
             "noise_std", "format_reward_weight", "accuracy_weight", "embedding_dim", "query_tokens",
             "embedding_noise_std"});
  sec.reject_unknown();
  sec.read("num_frames", e.num_frames);
  sec.read("feature_dim", e.feature_dim);
  sec.read("num_answers", e.num_answers);
  sec.read("num_evidence_frames", e.num_evidence_frames);
  sec.read("evidence_signal_strength", e.evidence_signal_strength);
  sec.read("noise_std", e.noise_std);
  sec.read("format_reward_weight", e.format_reward_weight);
  sec.read("accuracy_weight", e.accuracy_weight);
  sec.read("embedding_dim", e.embedding_dim);
  sec.read("query_tokens", e.query_tokens);
  sec.read("embedding_noise_std", e.embedding_noise_std);
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }

  RunConfig cfg;
  Section top(root, "");
  top.allow({"group", "variant_mode", "tau", "budget", "steps", "learning_rate", "seed", "env", "ema_alpha",
             "metrics_path", "smoothed_metrics_path", "batch_size", "eval_interval", "eval_episodes",
             "attach_augment", "stochastic_window"});
  top.reject_unknown();
  top.require("group");
  top.require("steps");

  read_group(top.section("group"), cfg.group);
  if (top.has("env")) read_env(top.section("env"), cfg.env);

  std::string mode(to_string(cfg.variant_mode));
  top.read("variant_mode", mode);
  cfg.variant_mode = parse_variant_mode(mode);
  top.read("tau", cfg.tau);
  top.read("budget", cfg.budget);
  top.read("steps", cfg.steps);
  top.read("learning_rate", cfg.learning_rate);
  top.read_u64("seed", cfg.seed);
  top.read("ema_alpha", cfg.ema_alpha);
  top.read("metrics_path", cfg.metrics_path);
  top.read("smoothed_metrics_path", cfg.smoothed_metrics_path);
  top.read("batch_size", cfg.batch_size);
  top.read("eval_interval", cfg.eval_interval);
  top.read("eval_episodes", cfg.eval_episodes);
  top.read("attach_augment", cfg.attach_augment);
  if (top.has("stochastic_window")) {
    std::size_t w = 0;
    top.read("stochastic_window", w);
    cfg.stochastic_window = w;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read config file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

std::string dump_run_config(const RunConfig& c) {
  json j;
  j["group"] = {{"G", c.group.num_generations},
                {"M", c.group.num_variants},
                {"clip_epsilon", c.group.clip_epsilon},
                {"kl_coeff", c.group.kl_coeff},
                {"std_guard", c.group.std_guard},
                {"advantage_mode", std::string(to_string(c.group.advantage_mode))}};
  j["env"] = {{"num_frames", c.env.num_frames},
              {"feature_dim", c.env.feature_dim},
              {"num_answers", c.env.num_answers},
              {"num_evidence_frames", c.env.num_evidence_frames},
              {"evidence_signal_strength", c.env.evidence_signal_strength},
              {"noise_std", c.env.noise_std},
              {"format_reward_weight", c.env.format_reward_weight},
              {"accuracy_weight", c.env.accuracy_weight},
              {"embedding_dim", c.env.embedding_dim},
              {"query_tokens", c.env.query_tokens},
              {"embedding_noise_std", c.env.embedding_noise_std}};
  j["variant_mode"] = std::string(to_string(c.variant_mode));
  j["tau"] = c.tau;
  j["budget"] = c.budget;
  j["steps"] = c.steps;
  j["learning_rate"] = c.learning_rate;
  j["seed"] = c.seed;
  j["ema_alpha"] = c.ema_alpha;
  j["metrics_path"] = c.metrics_path;
  j["smoothed_metrics_path"] = c.smoothed_metrics_path;
  j["batch_size"] = c.batch_size;
  j["eval_interval"] = c.eval_interval;
  j["eval_episodes"] = c.eval_episodes;
  j["attach_augment"] = c.attach_augment;
  if (c.stochastic_window) j["stochastic_window"] = *c.stochastic_window;
  return j.dump(2);
}

}  // namespace strive
