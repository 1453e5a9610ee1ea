// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "saccade/ops.hpp"
#include "saccade/param_store.hpp"
#include "saccade/rng.hpp"

namespace saccade::detail {

// Uniform in ±sqrt(6 / (fan_in + fan_out)).
inline Tensor xavier(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> v(fan_in * fan_out);
  for (double& x : v) x = rng.uniform(-bound, bound);
  return Tensor::from({fan_in, fan_out}, std::move(v), true);
}

inline void add_linear(ParamStore& store, Rng& rng, const std::string& prefix, std::size_t in,
                       std::size_t out) {
  store.add(prefix + "/w", xavier(rng, in, out));
  store.add(prefix + "/b", Tensor::zeros({out}, true));
}

inline void add_layernorm(ParamStore& store, const std::string& prefix, std::size_t dim) {
  store.add(prefix + "/g", Tensor::full({dim}, 1.0, true));
  store.add(prefix + "/b", Tensor::zeros({dim}, true));
}

inline Tensor linear(const ParamStore& store, const std::string& prefix, const Tensor& x) {
  return ops::add_bias(ops::matmul(x, store.get(prefix + "/w")), store.get(prefix + "/b"));
}

}  // namespace saccade::detail
