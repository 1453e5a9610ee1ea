// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major tensors of doubles with dynamic, tape-based reverse-mode
// differentiation. Every op that sees an input with requires_grad (while
// grad mode is on) records its parents and a backward closure on the
// output node; backward() walks that graph in reverse topological order.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace saccade {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> data;
  // Accumulated gradient visible to users (leaves only).
  std::vector<double> grad;
  // Scratch gradient for the backward pass in flight.
  std::vector<double> pass_grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const { return parents.empty(); }
  std::vector<double>& pass_grad_buffer() {
    if (pass_grad.empty()) pass_grad.assign(data.size(), 0.0);
    return pass_grad;
  }
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> data,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  /// 1×n row.
  static Tensor row(std::vector<double> data, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t numel() const { return node_->data.size(); }
  std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }

  std::span<const double> data() const { return node_->data; }
  /// Writable view of the values. Only meaningful on leaves (parameters,
  /// inputs); mutating an intermediate invalidates recorded closures.
  std::span<double> mutable_data() { return node_->data; }
  double item() const;
  double at(std::size_t i) const { return node_->data.at(i); }
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool flag);
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad; }
  /// Allocates the gradient buffer if absent, then fills it with zeros.
  void zero_grad();

  /// Reverse-mode sweep from this scalar. Leaf gradients accumulate (+=)
  /// across calls; each call's contribution is summed in a scratch buffer
  /// first so that two identical passes double a gradient exactly.
  void backward() const;

  /// Copy of the values with no graph attached.
  Tensor detach() const;

  std::shared_ptr<detail::Node> node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Grad mode is a thread-local flag. While disabled, ops build no graph.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace saccade
