// SPDX-License-Identifier: Apache-2.0
//
// Dense baseline: flatten -> fc -> relu -> fc -> relu -> logits. It reads
// whole zero-filled frames, so every masked patch shifts its input.
#pragma once

#include <cstdint>

#include "saccade/param_store.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

struct DenseConfig {
  int width = 32;
  int height = 32;
  int channels = 1;
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  std::size_t classes = 4;

  std::size_t input_dim() const { return static_cast<std::size_t>(width) * height * channels; }
  void validate() const;
};

ParamStore init_dense_params(const DenseConfig& config, std::uint64_t seed);

/// Logits [1 × classes].
Tensor dense_forward(const Frame& frame, const ParamStore& params, const DenseConfig& config);

}  // namespace saccade
