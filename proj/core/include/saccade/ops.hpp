// SPDX-License-Identifier: Apache-2.0
//
// Differentiable ops over Tensor. No implicit broadcasting: binary
// elementwise ops need equal shapes or a one-element right operand.
// Row-vector biases go through add_bias explicitly.
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "saccade/tensor.hpp"

namespace saccade::ops {

enum class Elementwise { add, mul, sigmoid, tanh, relu };

/// Parses "add", "mul", "sigmoid", "tanh", "relu"; throws ConfigError otherwise.
Elementwise parse_elementwise(std::string_view tag);

/// Tagged dispatch. Binary tags need `b`; unary tags ignore it.
Tensor elementwise(Elementwise tag, const Tensor& a, const Tensor* b = nullptr);
Tensor elementwise(std::string_view tag, const Tensor& a, const Tensor* b = nullptr);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double value);
/// 1 - a
Tensor one_minus(const Tensor& a);

Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);

/// x[m×n] + b broadcast across rows; b has n elements (shape [n] or [1×n]).
Tensor add_bias(const Tensor& x, const Tensor& b);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

Tensor softmax(const Tensor& x, std::size_t axis);
/// Normalises each row of the last axis, then applies gain and bias (both [d]).
Tensor layernorm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

/// Mean negative log-softmax probability of the true class.
Tensor cross_entropy(const Tensor& logits, std::span<const int> labels);

inline constexpr double kBceClamp = 1e-7;
/// Mean binary cross-entropy; pred is clamped to [1e-7, 1 - 1e-7].
Tensor bce(const Tensor& pred, const Tensor& target);

// Structural ops on rank-2 tensors.
Tensor reshape(const Tensor& a, Shape shape);
Tensor concat_rows(const Tensor& top, const Tensor& bottom);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
/// Rows of `table` picked by index, in the given order.
Tensor gather_rows(const Tensor& table, std::span<const std::size_t> indices);

}  // namespace saccade::ops
