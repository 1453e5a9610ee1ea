// SPDX-License-Identifier: Apache-2.0
#include "saccade/vit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "init_util.hpp"
#include "saccade/error.hpp"
#include "saccade/ops.hpp"

namespace saccade {

using detail::linear;

void ViTConfig::validate() const {
  if (patch_size <= 0) throw ConfigError("vit: patch_size must be positive");
  if (channels != 1 && channels != 3) throw ConfigError("vit: channels must be 1 or 3");
  if (dim == 0 || heads == 0 || dim % heads != 0) throw ConfigError("vit: dim must be a multiple of heads");
  if (blocks == 0 || mlp_dim == 0) throw ConfigError("vit: blocks and mlp_dim must be positive");
  if (classes < 2) throw ConfigError("vit: need at least two classes");
  if (max_patches == 0) throw ConfigError("vit: max_patches must be positive");
}

ParamStore init_vit_params(const ViTConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  ParamStore store;
  const std::size_t d = config.dim;
  detail::add_linear(store, rng, "vit/embed", config.token_dim(), d);
  store.add("vit/cls", detail::xavier(rng, 1, d));
  store.add("vit/pos", detail::xavier(rng, config.max_patches + 1, d));
  for (std::size_t b = 0; b < config.blocks; ++b) {
    const std::string pre = "vit/block" + std::to_string(b);
    detail::add_layernorm(store, pre + "/ln1", d);
    detail::add_linear(store, rng, pre + "/attn/q", d, d);
    // No key bias: it shifts every score for a query equally, so softmax
    // ignores it and its gradient is identically zero.
    store.add(pre + "/attn/k/w", detail::xavier(rng, d, d));
    detail::add_linear(store, rng, pre + "/attn/v", d, d);
    detail::add_linear(store, rng, pre + "/attn/o", d, d);
    detail::add_layernorm(store, pre + "/ln2", d);
    detail::add_linear(store, rng, pre + "/mlp/fc1", d, config.mlp_dim);
    detail::add_linear(store, rng, pre + "/mlp/fc2", config.mlp_dim, d);
  }
  detail::add_layernorm(store, "vit/ln_f", d);
  detail::add_linear(store, rng, "vit/head", d, config.classes);
  return store;
}

namespace {

Tensor layer_norm(const ParamStore& p, const std::string& pre, const Tensor& x) {
  return ops::layernorm(x, p.get(pre + "/g"), p.get(pre + "/b"));
}

Tensor self_attention(const ParamStore& p, const std::string& pre, const Tensor& x,
                      std::size_t heads) {
  const Tensor q = linear(p, pre + "/q", x);
  const Tensor k = ops::matmul(x, p.get(pre + "/k/w"));
  const Tensor v = linear(p, pre + "/v", x);
  const std::size_t head_dim = x.dim(1) / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  std::vector<Tensor> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t lo = h * head_dim, hi = lo + head_dim;
    const Tensor qh = ops::slice_cols(q, lo, hi);
    const Tensor kh = ops::slice_cols(k, lo, hi);
    const Tensor vh = ops::slice_cols(v, lo, hi);
    const Tensor scores = ops::scale(ops::matmul(qh, ops::transpose(kh)), scale);
    outs.push_back(ops::matmul(ops::softmax(scores, 1), vh));
  }
  return linear(p, pre + "/o", ops::concat_cols(outs));
}

}  // namespace

Tensor vit_forward(std::span<const Token> tokens, const ParamStore& params, const ViTConfig& config) {
  if (tokens.size() > config.max_patches) throw DimensionError("vit: more tokens than patches");
  std::vector<bool> seen(config.max_patches, false);
  for (const Token& t : tokens) {
    if (t.index >= config.max_patches) throw DimensionError("vit: token index out of range");
    if (seen[t.index]) throw DimensionError("vit: duplicate token index " + std::to_string(t.index));
    seen[t.index] = true;
    if (t.pixels.size() != config.token_dim()) throw DimensionError("vit: token has wrong length");
  }

  const Tensor& pos = params.get("vit/pos");
  const std::size_t zero = 0;
  Tensor x = ops::add(params.get("vit/cls"), ops::gather_rows(pos, {&zero, 1}));
  if (!tokens.empty()) {
    std::vector<double> flat;
    flat.reserve(tokens.size() * config.token_dim());
    std::vector<std::size_t> rows;
    rows.reserve(tokens.size());
    for (const Token& t : tokens) {
      flat.insert(flat.end(), t.pixels.begin(), t.pixels.end());
      rows.push_back(t.index + 1);
    }
    const Tensor patches = Tensor::from({tokens.size(), config.token_dim()}, std::move(flat));
    const Tensor embedded = ops::add(linear(params, "vit/embed", patches), ops::gather_rows(pos, rows));
    x = ops::concat_rows(x, embedded);
  }

  for (std::size_t b = 0; b < config.blocks; ++b) {
    const std::string pre = "vit/block" + std::to_string(b);
    x = ops::add(x, self_attention(params, pre + "/attn", layer_norm(params, pre + "/ln1", x), config.heads));
    const Tensor hidden = ops::relu(linear(params, pre + "/mlp/fc1", layer_norm(params, pre + "/ln2", x)));
    x = ops::add(x, linear(params, pre + "/mlp/fc2", hidden));
  }
  const Tensor cls = layer_norm(params, "vit/ln_f", ops::slice_rows(x, 0, 1));
  return linear(params, "vit/head", cls);
}

}  // namespace saccade
