// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace saccade {

/// One plot-ready curve: metric values over an axis (e.g. budget fractions).
struct MetricReport {
  std::string name;
  std::string axis_name = "axis";
  std::vector<double> axis;
  std::vector<double> values;
  std::optional<std::vector<double>> stderr_values;
  /// seed, config hash, policy, ...
  std::map<std::string, std::string> metadata;

  /// Throws ConfigError on length mismatch or non-finite values.
  void validate() const;
  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

enum class ReportFormat { csv, json };

/// CSV: header "axis,value[,stderr]" then one row per axis point.
/// JSON: all fields. Both newline-terminated. Validates before writing.
void emit_report(const MetricReport& report, const std::filesystem::path& file, ReportFormat format);
MetricReport read_report_json(const std::filesystem::path& file);

std::string report_to_csv(const MetricReport& report);
std::string report_to_json(const MetricReport& report);

/// "<experiment>_<metric>_seed<seed>.<ext>"
std::string report_filename(const std::string& experiment_id, const std::string& metric,
                            std::uint64_t seed, ReportFormat format);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace saccade
