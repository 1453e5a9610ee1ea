// SPDX-License-Identifier: Apache-2.0
#include "saccade/dense.hpp"

#include "init_util.hpp"
#include "saccade/error.hpp"
#include "saccade/ops.hpp"

namespace saccade {

void DenseConfig::validate() const {
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3)) {
    throw ConfigError("dense: bad input geometry");
  }
  if (hidden1 == 0 || hidden2 == 0 || classes < 2) throw ConfigError("dense: bad layer sizes");
}

ParamStore init_dense_params(const DenseConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  ParamStore store;
  detail::add_linear(store, rng, "dense/fc1", config.input_dim(), config.hidden1);
  detail::add_linear(store, rng, "dense/fc2", config.hidden1, config.hidden2);
  detail::add_linear(store, rng, "dense/out", config.hidden2, config.classes);
  return store;
}

Tensor dense_forward(const Frame& frame, const ParamStore& params, const DenseConfig& config) {
  if (frame.width != config.width || frame.height != config.height || frame.channels != config.channels) {
    throw DimensionError("dense: frame geometry does not match config");
  }
  const Tensor x = Tensor::row(frame.data);
  const Tensor h1 = ops::relu(detail::linear(params, "dense/fc1", x));
  const Tensor h2 = ops::relu(detail::linear(params, "dense/fc2", h1));
  return detail::linear(params, "dense/out", h2);
}

}  // namespace saccade
