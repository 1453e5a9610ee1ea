// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <toml.hpp>

#include "saccade/error.hpp"

namespace saccade::cli {

struct Config::Impl {
  toml::table table;
  std::string source;
  std::string text;
  std::vector<std::string> overrides;
};

namespace {

[[noreturn]] void raise_key_error(std::string_view key, int line, const std::string& what) {
  std::string where = line > 0 ? " (line " + std::to_string(line) + ")" : " (set on the command line)";
  throw ConfigError("config key '" + std::string(key) + "'" + where + ": " + what);
}

int node_line(const toml::node& node) { return static_cast<int>(node.source().begin.line); }

const char* type_name(const toml::node& node) {
  switch (node.type()) {
    case toml::node_type::string: return "a string";
    case toml::node_type::integer: return "an integer";
    case toml::node_type::floating_point: return "a number";
    case toml::node_type::boolean: return "a boolean";
    case toml::node_type::array: return "an array";
    case toml::node_type::table: return "a table";
    default: return "a date/time";
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_key(std::string_view key) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.emplace_back(key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

double as_number(std::string_view key, const toml::node& node) {
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
  raise_key_error(key, node_line(node), std::string("expected a number, got ") + type_name(node));
}

}  // namespace

Config::Config() : impl_(std::make_unique<Impl>()) {}
Config::Config(const Config& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
Config& Config::operator=(const Config& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
Config::Config(Config&&) noexcept = default;
Config& Config::operator=(Config&&) noexcept = default;
Config::~Config() = default;

Config Config::from_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str(), file.string());
}

Config Config::from_string(std::string_view text, const std::string& source) {
  Config c;
  c.impl_->source = source;
  c.impl_->text = std::string(text);
  try {
    c.impl_->table = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.source().begin.line) + ":" +
                      std::to_string(e.source().begin.column) + ": " + std::string(e.description()));
  }
  return c;
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto parts = split_key(key);
  if (parts.size() < 2 || std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); })) {
    throw ConfigError("override key '" + key + "' must look like section.key");
  }

  toml::table parsed;
  bool is_toml = false;
  try {
    parsed = toml::parse("v = " + value);
    is_toml = true;
  } catch (const toml::parse_error&) {
  }

  toml::table* t = &impl_->table;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    toml::node* child = t->get(parts[i]);
    if (!child) {
      t->insert(parts[i], toml::table{});
      child = t->get(parts[i]);
    }
    t = child->as_table();
    if (!t) throw ConfigError("override key '" + key + "': '" + parts[i] + "' is not a section");
  }
  impl_->overrides.push_back(key + "=" + value);
  // Values are rebuilt from scratch so they carry no source position and
  // later errors read "set on the command line".
  const toml::node* v = is_toml ? parsed.get("v") : nullptr;
  if (!v) {
    t->insert_or_assign(parts.back(), value);
  } else if (auto* arr = v->as_array()) {
    toml::array copy;
    for (const toml::node& el : *arr) {
      if (auto s = el.value_exact<std::string>()) copy.push_back(*s);
      else if (auto i = el.value_exact<std::int64_t>()) copy.push_back(*i);
      else if (auto f = el.value_exact<double>()) copy.push_back(*f);
      else if (auto b = el.value_exact<bool>()) copy.push_back(*b);
      else throw ConfigError("override key '" + key + "': unsupported array element");
    }
    t->insert_or_assign(parts.back(), std::move(copy));
  } else if (auto s = v->value_exact<std::string>()) {
    t->insert_or_assign(parts.back(), *s);
  } else if (auto i = v->value_exact<std::int64_t>()) {
    t->insert_or_assign(parts.back(), *i);
  } else if (auto f = v->value_exact<double>()) {
    t->insert_or_assign(parts.back(), *f);
  } else if (auto b = v->value_exact<bool>()) {
    t->insert_or_assign(parts.back(), *b);
  } else {
    // Dates and inline tables are not meaningful here; keep the raw text.
    t->insert_or_assign(parts.back(), value);
  }
}

bool Config::has(std::string_view key) const { return static_cast<bool>(impl_->table.at_path(key)); }

int Config::line_of(std::string_view key) const {
  auto n = impl_->table.at_path(key);
  return n ? node_line(*n.node()) : 0;
}

std::optional<std::string> Config::string_opt(std::string_view key) const {
  auto n = impl_->table.at_path(key);
  if (!n) return std::nullopt;
  if (auto v = n.value_exact<std::string>()) return *v;
  raise_key_error(key, node_line(*n.node()), std::string("expected a string, got ") + type_name(*n.node()));
}

std::string Config::string(std::string_view key, std::string_view fallback) const {
  auto v = string_opt(key);
  return v ? *v : std::string(fallback);
}

std::optional<std::int64_t> Config::integer_opt(std::string_view key) const {
  auto n = impl_->table.at_path(key);
  if (!n) return std::nullopt;
  if (auto v = n.value_exact<std::int64_t>()) return *v;
  raise_key_error(key, node_line(*n.node()), std::string("expected an integer, got ") + type_name(*n.node()));
}

std::int64_t Config::integer(std::string_view key, std::int64_t fallback) const {
  auto v = integer_opt(key);
  return v ? *v : fallback;
}

std::optional<double> Config::number_opt(std::string_view key) const {
  auto n = impl_->table.at_path(key);
  if (!n) return std::nullopt;
  return as_number(key, *n.node());
}

double Config::number(std::string_view key, double fallback) const {
  auto v = number_opt(key);
  return v ? *v : fallback;
}

bool Config::boolean(std::string_view key, bool fallback) const {
  auto n = impl_->table.at_path(key);
  if (!n) return fallback;
  if (auto v = n.value_exact<bool>()) return *v;
  raise_key_error(key, node_line(*n.node()), std::string("expected true or false, got ") + type_name(*n.node()));
}

std::vector<double> Config::numbers(std::string_view key, const std::vector<double>& fallback) const {
  auto n = impl_->table.at_path(key);
  if (!n) return fallback;
  const toml::array* arr = n.as_array();
  if (!arr) raise_key_error(key, node_line(*n.node()), std::string("expected an array of numbers, got ") + type_name(*n.node()));
  std::vector<double> out;
  for (const toml::node& el : *arr) out.push_back(as_number(key, el));
  return out;
}

std::vector<std::string> Config::strings(std::string_view key, const std::vector<std::string>& fallback) const {
  auto n = impl_->table.at_path(key);
  if (!n) return fallback;
  const toml::array* arr = n.as_array();
  if (!arr) raise_key_error(key, node_line(*n.node()), std::string("expected an array of strings, got ") + type_name(*n.node()));
  std::vector<std::string> out;
  for (const toml::node& el : *arr) {
    auto v = el.value_exact<std::string>();
    if (!v) raise_key_error(key, node_line(el), std::string("expected an array of strings, found ") + type_name(el));
    out.push_back(*v);
  }
  return out;
}

void Config::check_known(std::span<const std::string_view> known) const {
  std::string worst_key;
  int worst_line = std::numeric_limits<int>::max();
  std::string reason;
  auto consider = [&](const std::string& key, const toml::node& node, const char* why) {
    int line = node_line(node);
    if (line == 0) line = std::numeric_limits<int>::max() - 1;
    if (line < worst_line) {
      worst_line = line;
      worst_key = key;
      reason = why;
    }
  };
  for (const auto& [section, node] : impl_->table) {
    const std::string sec(section.str());
    const toml::table* t = node.as_table();
    if (!t) {
      consider(sec, node, "keys must live inside a [section]");
      continue;
    }
    for (const auto& [k, v] : *t) {
      const std::string dotted = sec + "." + std::string(k.str());
      if (std::find(known.begin(), known.end(), dotted) == known.end()) consider(dotted, v, "unknown key");
    }
  }
  if (!worst_key.empty()) {
    raise_key_error(worst_key, worst_line >= std::numeric_limits<int>::max() - 1 ? 0 : worst_line, reason);
  }
}

void Config::fail(std::string_view key, const std::string& what) const {
  raise_key_error(key, line_of(key), what);
}

const std::string& Config::text() const { return impl_->text; }
const std::vector<std::string>& Config::overrides() const { return impl_->overrides; }

std::string Config::to_toml() const {
  std::ostringstream os;
  os << impl_->table << "\n";
  return os.str();
}

}  // namespace saccade::cli
