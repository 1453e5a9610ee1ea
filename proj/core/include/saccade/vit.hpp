// SPDX-License-Identifier: Apache-2.0
//
// Tiny vision transformer that only ever sees sensed patches. Each token
// is linearly embedded, offset by the positional row of its true grid
// index (row 0 is reserved for the class token), and the class-token
// output after the last block is read out as logits. Masked patches are
// simply absent from the sequence.
#pragma once

#include <cstdint>
#include <span>

#include "saccade/param_store.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

struct ViTConfig {
  int patch_size = 8;
  int channels = 1;
  std::size_t dim = 64;
  std::size_t heads = 4;
  std::size_t blocks = 4;
  std::size_t mlp_dim = 128;
  std::size_t classes = 4;
  std::size_t max_patches = 16;

  std::size_t token_dim() const { return static_cast<std::size_t>(patch_size) * patch_size * channels; }
  /// Throws ConfigError on dim % heads != 0, classes < 2, etc.
  void validate() const;
};

ParamStore init_vit_params(const ViTConfig& config, std::uint64_t seed);

/// Returns logits of shape [1 × classes]. Throws DimensionError on
/// duplicate or out-of-range token indices.
Tensor vit_forward(std::span<const Token> tokens, const ParamStore& params, const ViTConfig& config);

}  // namespace saccade
