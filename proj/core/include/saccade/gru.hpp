// SPDX-License-Identifier: Apache-2.0
//
// Saccade predictor: one GRU over the flattened patch grid. Input per
// patch is the per-channel mean of the sensed pixels plus a sensed flag;
// the head maps the new hidden state to one logit per patch (the heatmap
// for the next frame).
//
//   z  = σ(x·Wz + h·Uz + bz)
//   r  = σ(x·Wr + h·Ur + br)
//   h~ = tanh(x·Wh + (r ⊙ h)·Uh + bh)
//   h' = (1 - z) ⊙ h + z ⊙ h~
//   logits = h'·V + c
#pragma once

#include <cstdint>
#include <vector>

#include "saccade/param_store.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

struct GRUConfig {
  std::size_t input_per_patch = 2;  // channels + 1
  std::size_t num_patches = 64;
  std::size_t hidden = 128;

  std::size_t input_dim() const { return input_per_patch * num_patches; }
  void validate() const;
};

/// Weights use the scaled-uniform rule; biases and h0 start at zero. h0 is
/// trainable and stored as "gru/h0".
ParamStore init_gru_params(const GRUConfig& config, std::uint64_t seed);

struct GruStepOutput {
  Tensor hidden;  // [1 × hidden]
  Tensor logits;  // [1 × num_patches]
};

GruStepOutput gru_step(const Tensor& x, const Tensor& h, const ParamStore& params, const GRUConfig& config);

/// Heatmap logits read straight from a hidden state (used for the state
/// before any frame has been consumed).
Tensor gru_head(const Tensor& h, const ParamStore& params);

/// Per patch: channel means if sensed (zeros otherwise), then the sensed
/// flag. Length (channels + 1) · patches, in patch-index order.
std::vector<double> frame_features(const Frame& frame, const PatchGrid& grid, const PatchMask& mask);

}  // namespace saccade
