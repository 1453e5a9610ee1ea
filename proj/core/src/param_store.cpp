// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint layout:
//   8 bytes   magic "SACCKPT1"
//   8 bytes   little-endian u64 header length L
//   L bytes   UTF-8 JSON header
//   payload   little-endian IEEE-754 doubles, concatenated
//
// The header carries format_version, step, and one record per stored
// array: {"name", "kind" (param|m|v), "shape", "offset", "count"} where
// offset/count are in doubles from the start of the payload.
#include "saccade/param_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "saccade/error.hpp"

namespace saccade {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'C', 'C', 'K', 'P', 'T', '1'};
constexpr int kFormatVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& values) {
  for (double d : values) put_u64(out, std::bit_cast<std::uint64_t>(d));
}

}  // namespace

Tensor& ParamStore::add(const std::string& path, Tensor value) {
  if (params_.count(path)) throw ConfigError("parameter '" + path + "' registered twice");
  value.set_requires_grad(true);
  m_[path].assign(value.numel(), 0.0);
  v_[path].assign(value.numel(), 0.0);
  return params_.emplace(path, std::move(value)).first->second;
}

const Tensor& ParamStore::get(const std::string& path) const {
  auto it = params_.find(path);
  if (it == params_.end()) throw ConfigError("unknown parameter '" + path + "'");
  return it->second;
}

Tensor& ParamStore::get(const std::string& path) {
  auto it = params_.find(path);
  if (it == params_.end()) throw ConfigError("unknown parameter '" + path + "'");
  return it->second;
}

std::size_t ParamStore::total_values() const {
  std::size_t n = 0;
  for (const auto& [_, t] : params_) n += t.numel();
  return n;
}

void ParamStore::zero_grads() {
  for (auto& [_, t] : params_) t.zero_grad();
}

void ParamStore::adam_step(const AdamConfig& config) {
  for (const auto& [path, t] : params_) {
    if (!t.has_grad()) throw ConfigError("optimizer step: parameter '" + path + "' has no gradient");
  }
  ++step_;
  const double t_step = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(config.beta1, t_step);
  const double bc2 = 1.0 - std::pow(config.beta2, t_step);
  for (auto& [path, t] : params_) {
    auto w = t.mutable_data();
    auto g = t.grad();
    auto& m = m_[path];
    auto& v = v_[path];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      w[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
  }
}

const std::vector<double>& ParamStore::first_moment(const std::string& path) const {
  auto it = m_.find(path);
  if (it == m_.end()) throw ConfigError("unknown parameter '" + path + "'");
  return it->second;
}

const std::vector<double>& ParamStore::second_moment(const std::string& path) const {
  auto it = v_.find(path);
  if (it == v_.end()) throw ConfigError("unknown parameter '" + path + "'");
  return it->second;
}

ParamStore ParamStore::clone() const {
  ParamStore out;
  for (const auto& [path, t] : params_) out.add(path, t.detach());
  out.m_ = m_;
  out.v_ = v_;
  out.step_ = step_;
  return out;
}

void ParamStore::save(const std::filesystem::path& file) const {
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["step"] = step_;
  nlohmann::json records = nlohmann::json::array();
  std::uint64_t offset = 0;
  auto record = [&](const std::string& name, const char* kind, const Shape& shape,
                    std::size_t count) {
    records.push_back({{"name", name}, {"kind", kind}, {"shape", shape}, {"offset", offset},
                       {"count", count}});
    offset += count;
  };
  for (const auto& [path, t] : params_) record(path, "param", t.shape(), t.numel());
  for (const auto& [path, t] : params_) record(path, "m", t.shape(), t.numel());
  for (const auto& [path, t] : params_) record(path, "v", t.shape(), t.numel());
  header["tensors"] = std::move(records);
  const std::string text = header.dump();

  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + file.string());
  out.write(kMagic, sizeof kMagic);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [path, t] : params_) put_doubles(out, {t.data().begin(), t.data().end()});
  for (const auto& [path, _] : params_) put_doubles(out, m_.at(path));
  for (const auto& [path, _] : params_) put_doubles(out, v_.at(path));
  if (!out) throw IoError("failed writing checkpoint: " + file.string());
}

ParamStore ParamStore::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + file.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw IoError("not a checkpoint file: " + file.string());
  }
  const std::uint64_t header_len = get_u64(bytes.data() + 8);
  if (16 + header_len > bytes.size()) throw IoError("truncated checkpoint header: " + file.string());
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16,
                                   bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed checkpoint header in " + file.string() + ": " + e.what());
  }
  if (header.value("format_version", 0) != kFormatVersion) {
    throw IoError("unsupported checkpoint format version in " + file.string());
  }
  const unsigned char* payload = bytes.data() + 16 + header_len;
  const std::size_t payload_doubles = (bytes.size() - 16 - header_len) / 8;

  ParamStore store;
  std::map<std::string, std::vector<double>> m, v;
  for (const auto& rec : header.at("tensors")) {
    const auto name = rec.at("name").get<std::string>();
    const auto kind = rec.at("kind").get<std::string>();
    const auto shape = rec.at("shape").get<Shape>();
    const auto offset = rec.at("offset").get<std::uint64_t>();
    const auto count = rec.at("count").get<std::uint64_t>();
    if (offset + count > payload_doubles || shape_numel(shape) != count) {
      throw IoError("checkpoint record '" + name + "' out of bounds in " + file.string());
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      values[i] = std::bit_cast<double>(get_u64(payload + 8 * (offset + i)));
    }
    if (kind == "param") {
      store.add(name, Tensor::from(shape, std::move(values), true));
    } else if (kind == "m") {
      m[name] = std::move(values);
    } else if (kind == "v") {
      v[name] = std::move(values);
    } else {
      throw IoError("unknown checkpoint record kind '" + kind + "'");
    }
  }
  for (auto& [name, values] : m) {
    if (store.contains(name)) store.m_[name] = std::move(values);
  }
  for (auto& [name, values] : v) {
    if (store.contains(name)) store.v_[name] = std::move(values);
  }
  store.step_ = header.at("step").get<std::uint64_t>();
  return store;
}

}  // namespace saccade
