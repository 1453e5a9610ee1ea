// SPDX-License-Identifier: Apache-2.0
//
// Experiment config: a TOML file of [sections] with `key = value` pairs,
// addressed here by dotted keys ("training.lr"). Every lookup failure names
// the key and, when the key came from the file, its line.
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace saccade::cli {

class Config {
 public:
  Config();
  Config(const Config& other);
  Config& operator=(const Config& other);
  Config(Config&&) noexcept;
  Config& operator=(Config&&) noexcept;
  ~Config();

  static Config from_file(const std::filesystem::path& file);
  static Config from_string(std::string_view text, const std::string& source = "<config>");

  /// "section.key=value". The value is read as a TOML value when it parses
  /// as one (numbers, booleans, quoted strings, arrays) and as a bare
  /// string otherwise.
  void apply_override(std::string_view assignment);

  bool has(std::string_view key) const;
  /// 0 when the key is absent or was set on the command line.
  int line_of(std::string_view key) const;

  std::string string(std::string_view key, std::string_view fallback) const;
  std::optional<std::string> string_opt(std::string_view key) const;
  std::int64_t integer(std::string_view key, std::int64_t fallback) const;
  std::optional<std::int64_t> integer_opt(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  std::optional<double> number_opt(std::string_view key) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::vector<double> numbers(std::string_view key, const std::vector<double>& fallback) const;
  std::vector<std::string> strings(std::string_view key, const std::vector<std::string>& fallback) const;

  /// Throws ConfigError naming the first key (in file order) that is not
  /// listed in `known`, or that appears outside any section.
  void check_known(std::span<const std::string_view> known) const;

  /// Throws ConfigError "config key '<key>' (line N): <what>".
  [[noreturn]] void fail(std::string_view key, const std::string& what) const;

  /// Canonical TOML text (sections and keys sorted).
  std::string to_toml() const;

  /// The text the config was parsed from, and the overrides applied since.
  const std::string& text() const;
  const std::vector<std::string>& overrides() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace saccade::cli
