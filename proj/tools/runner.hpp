// SPDX-License-Identifier: Apache-2.0
//
// Config-driven pipelines behind the `saccade` subcommands. Each run writes
// its artifacts under experiment.output_dir plus a manifest listing them.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace saccade::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitRuntime = 3 };

inline constexpr const char* kOutputRootEnv = "SACCADE_OUTPUT_ROOT";

struct RunResult {
  std::filesystem::path output_dir;
  /// Relative to output_dir (or absolute when written elsewhere), sorted.
  std::vector<std::string> outputs;
  std::filesystem::path manifest;
  /// Headline numbers, e.g. "auroc" or "mota/learned".
  std::map<std::string, double> summary;
};

std::span<const std::string_view> subcommand_names();
std::span<const std::string_view> known_config_keys();

/// Relative paths in the config (output_dir, dataset paths, checkpoints)
/// are resolved against `output_root` when given.
RunResult run_subcommand(std::string_view name, const Config& config,
                         const std::optional<std::filesystem::path>& output_root = std::nullopt);

}  // namespace saccade::cli
