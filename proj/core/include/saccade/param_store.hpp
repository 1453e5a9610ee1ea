// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "saccade/tensor.hpp"

namespace saccade {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Named trainable parameters plus Adam moment buffers.
///
/// Parameters are kept in a sorted map so iteration (and therefore
/// checkpoint layout and update order) is independent of insertion order.
class ParamStore {
 public:
  /// Registers a parameter; requires_grad is forced on. Throws ConfigError
  /// on a duplicate path.
  Tensor& add(const std::string& path, Tensor value);

  bool contains(const std::string& path) const { return params_.count(path) != 0; }
  const Tensor& get(const std::string& path) const;
  Tensor& get(const std::string& path);

  const std::map<std::string, Tensor>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  std::size_t total_values() const;

  /// Allocates-or-zeroes every gradient buffer.
  void zero_grads();

  /// One bias-corrected Adam update. Throws ConfigError when some parameter
  /// has never had a gradient buffer. Gradients are left untouched.
  void adam_step(const AdamConfig& config);

  std::uint64_t step_count() const { return step_; }

  const std::vector<double>& first_moment(const std::string& path) const;
  const std::vector<double>& second_moment(const std::string& path) const;

  /// Deep copy (fresh tensors, no shared graph nodes).
  ParamStore clone() const;

  void save(const std::filesystem::path& file) const;
  static ParamStore load(const std::filesystem::path& file);

 private:
  std::map<std::string, Tensor> params_;
  std::map<std::string, std::vector<double>> m_;
  std::map<std::string, std::vector<double>> v_;
  std::uint64_t step_ = 0;
};

}  // namespace saccade
