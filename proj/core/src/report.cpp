// SPDX-License-Identifier: Apache-2.0
#include "saccade/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "saccade/error.hpp"

namespace saccade {

void MetricReport::validate() const {
  if (axis.size() != values.size()) {
    throw ConfigError("report '" + name + "': axis has " + std::to_string(axis.size()) + " points but " +
                      std::to_string(values.size()) + " values");
  }
  if (stderr_values && stderr_values->size() != values.size()) {
    throw ConfigError("report '" + name + "': stderr length mismatch");
  }
  for (double v : axis)
    if (!std::isfinite(v)) throw ConfigError("report '" + name + "': non-finite axis value");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("report '" + name + "': non-finite metric value");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string report_to_csv(const MetricReport& report) {
  report.validate();
  std::string out = report.axis_name + ",value";
  if (report.stderr_values) out += ",stderr";
  out += '\n';
  for (std::size_t i = 0; i < report.axis.size(); ++i) {
    out += format_double(report.axis[i]) + "," + format_double(report.values[i]);
    if (report.stderr_values) out += "," + format_double((*report.stderr_values)[i]);
    out += '\n';
  }
  return out;
}

std::string report_to_json(const MetricReport& report) {
  report.validate();
  nlohmann::json j;
  j["name"] = report.name;
  j["axis_name"] = report.axis_name;
  j["axis"] = report.axis;
  j["values"] = report.values;
  if (report.stderr_values) j["stderr"] = *report.stderr_values;
  j["metadata"] = report.metadata;
  return j.dump(2) + "\n";
}

void emit_report(const MetricReport& report, const std::filesystem::path& file, ReportFormat format) {
  const std::string text = format == ReportFormat::csv ? report_to_csv(report) : report_to_json(report);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report for writing: " + file.string());
  out << text;
  if (!out) throw IoError("failed writing report " + file.string());
}

MetricReport read_report_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("missing report: " + file.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    MetricReport r;
    r.name = j.at("name").get<std::string>();
    r.axis_name = j.at("axis_name").get<std::string>();
    r.axis = j.at("axis").get<std::vector<double>>();
    r.values = j.at("values").get<std::vector<double>>();
    if (j.contains("stderr")) r.stderr_values = j.at("stderr").get<std::vector<double>>();
    r.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("failed to parse report " + file.string() + ": " + e.what());
  }
}

std::string report_filename(const std::string& experiment_id, const std::string& metric, std::uint64_t seed,
                            ReportFormat format) {
  return experiment_id + "_" + metric + "_seed" + std::to_string(seed) +
         (format == ReportFormat::csv ? ".csv" : ".json");
}

}  // namespace saccade
