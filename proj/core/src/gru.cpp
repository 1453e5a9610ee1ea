// SPDX-License-Identifier: Apache-2.0
#include "saccade/gru.hpp"

#include "init_util.hpp"
#include "saccade/error.hpp"
#include "saccade/ops.hpp"

namespace saccade {

void GRUConfig::validate() const {
  if (input_per_patch == 0 || num_patches == 0 || hidden == 0) {
    throw ConfigError("gru: all dimensions must be positive");
  }
}

ParamStore init_gru_params(const GRUConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  ParamStore store;
  const std::size_t in = config.input_dim(), h = config.hidden;
  for (const char* gate : {"z", "r", "h"}) {
    const std::string g(gate);
    store.add("gru/w" + g, detail::xavier(rng, in, h));
    store.add("gru/u" + g, detail::xavier(rng, h, h));
    store.add("gru/b" + g, Tensor::zeros({h}, true));
  }
  store.add("gru/v", detail::xavier(rng, h, config.num_patches));
  store.add("gru/c", Tensor::zeros({config.num_patches}, true));
  store.add("gru/h0", Tensor::zeros({1, h}, true));
  return store;
}

Tensor gru_head(const Tensor& h, const ParamStore& params) {
  return ops::add_bias(ops::matmul(h, params.get("gru/v")), params.get("gru/c"));
}

GruStepOutput gru_step(const Tensor& x, const Tensor& h, const ParamStore& params, const GRUConfig& config) {
  if (x.numel() != config.input_dim() || x.rank() != 2 || x.dim(0) != 1) {
    throw DimensionError("gru_step: input must be [1 x " + std::to_string(config.input_dim()) + "]");
  }
  if (h.numel() != config.hidden || h.rank() != 2 || h.dim(0) != 1) {
    throw DimensionError("gru_step: hidden state must be [1 x " + std::to_string(config.hidden) + "]");
  }
  auto gate = [&](const char* g, const Tensor& hin) {
    const std::string s(g);
    return ops::add_bias(ops::add(ops::matmul(x, params.get("gru/w" + s)), ops::matmul(hin, params.get("gru/u" + s))),
                         params.get("gru/b" + s));
  };
  const Tensor z = ops::sigmoid(gate("z", h));
  const Tensor r = ops::sigmoid(gate("r", h));
  const Tensor candidate = ops::tanh(gate("h", ops::mul(r, h)));
  const Tensor next = ops::add(ops::mul(ops::one_minus(z), h), ops::mul(z, candidate));
  return {next, gru_head(next, params)};
}

std::vector<double> frame_features(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) {
  if (!grid.matches(frame)) throw DimensionError("frame_features: grid does not match frame");
  if (mask.size() != grid.num_patches()) throw DimensionError("frame_features: mask does not match grid");
  const int ch = frame.channels;
  const int p = grid.patch_size();
  const std::size_t stride = static_cast<std::size_t>(ch) + 1;
  std::vector<double> out(stride * grid.num_patches(), 0.0);
  const double inv_area = 1.0 / (p * p);
  for (std::size_t i = 0; i < grid.num_patches(); ++i) {
    if (!mask.sensed(i)) continue;
    const PatchRect r = grid.rect(i);
    for (int c = 0; c < ch; ++c) {
      double s = 0.0;
      for (int y = 0; y < p; ++y)
        for (int x = 0; x < p; ++x) s += frame.at(r.row0 + y, r.col0 + x, c);
      out[i * stride + c] = s * inv_area;
    }
    out[i * stride + ch] = 1.0;
  }
  return out;
}

}  // namespace saccade
