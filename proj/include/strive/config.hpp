#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "strive/harness.hpp"

namespace strive {

// JSON run configuration. Sections and keys mirror RunConfig:
//
//   {
//     "group": {"G": 4, "M": 2, "clip_epsilon": 0.2, "kl_coeff": 0.04,
//               "std_guard": 1e-6, "advantage_mode": "strive_joint"},
//     "variant_mode": "importance", "tau": 0.4, "budget": 16, "steps": 500,
//     "learning_rate": 2.0, "seed": 1, "ema_alpha": 0.1,
//     "metrics_path": "metrics.csv",
//     "env": {"num_frames": 64, ...}
//   }
//
// group.G, group.M and steps are required; everything else has a default.
// Unknown keys and wrongly typed values raise ConfigError naming the field.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// The effective configuration, every field present.
std::string dump_run_config(const RunConfig& config);

}  // namespace strive
