// SPDX-License-Identifier: Apache-2.0
#include "saccade/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saccade/error.hpp"

namespace saccade::ops {

using detail::Node;

namespace {

Tensor make_result(const char* op, Shape shape, std::vector<double> data,
                   std::vector<Tensor> inputs, std::function<void(Node&)> backward) {
  for (double v : data) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value produced by ") + op);
  }
  Tensor out = Tensor::from(std::move(shape), std::move(data));
  if (!grad_enabled()) return out;
  bool needs = false;
  for (const Tensor& t : inputs) needs = needs || t.requires_grad();
  if (!needs) return out;
  auto node = out.node();
  node->requires_grad = true;
  for (const Tensor& t : inputs) node->parents.push_back(t.node());
  node->backward_fn = std::move(backward);
  return out;
}

// Gradient sink for parent i, or nullptr when it does not need one.
std::vector<double>* sink(Node& out, std::size_t i) {
  Node& p = *out.parents[i];
  return p.requires_grad ? &p.pass_grad_buffer() : nullptr;
}

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + " needs a rank-2 tensor, got " + shape_str(t.shape()));
  }
}

bool is_scalar_like(const Tensor& t) { return t.numel() == 1; }

void check_binary(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape() && !is_scalar_like(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

// C[m×n] += A[m×k] · B[k×n]
void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[m×n] += A[m×k] · B[n×k]^T
void gemm_nt_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      const double* arow = a + i * k;
      const double* brow = b + j * k;
      for (std::size_t p = 0; p < k; ++p) s += arow[p] * brow[p];
      c[i * n + j] += s;
    }
  }
}

// C[k×n] += A[m×k]^T · B[m×n]
void gemm_tn_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* brow = b + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      double* crow = c + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <typename F, typename DF>
Tensor unary(const char* op, const Tensor& a, F f, DF df_from_xy) {
  std::vector<double> out(a.numel());
  auto x = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x[i]);
  return make_result(op, a.shape(), std::move(out), {a}, [df_from_xy](Node& self) {
    auto* ga = sink(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->data;
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*ga)[i] += self.pass_grad[i] * df_from_xy(x[i], self.data[i]);
    }
  });
}

}  // namespace

Elementwise parse_elementwise(std::string_view tag) {
  if (tag == "add") return Elementwise::add;
  if (tag == "mul") return Elementwise::mul;
  if (tag == "sigmoid") return Elementwise::sigmoid;
  if (tag == "tanh") return Elementwise::tanh;
  if (tag == "relu") return Elementwise::relu;
  throw ConfigError("unknown elementwise op tag '" + std::string(tag) + "'");
}

Tensor elementwise(Elementwise tag, const Tensor& a, const Tensor* b) {
  switch (tag) {
    case Elementwise::add:
    case Elementwise::mul:
      if (!b) throw ConfigError("binary elementwise op needs a second operand");
      return tag == Elementwise::add ? add(a, *b) : mul(a, *b);
    case Elementwise::sigmoid:
      return sigmoid(a);
    case Elementwise::tanh:
      return tanh(a);
    case Elementwise::relu:
      return relu(a);
  }
  throw ConfigError("unknown elementwise op");
}

Tensor elementwise(std::string_view tag, const Tensor& a, const Tensor* b) {
  return elementwise(parse_elementwise(tag), a, b);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions differ " + shape_str(a.shape()) + " x " +
                         shape_str(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  gemm_acc(a.data().data(), b.data().data(), out.data(), m, k, n);
  return make_result("matmul", {m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    const auto& av = self.parents[0]->data;
    const auto& bv = self.parents[1]->data;
    if (auto* ga = sink(self, 0)) gemm_nt_acc(self.pass_grad.data(), bv.data(), ga->data(), m, n, k);
    if (auto* gb = sink(self, 1)) gemm_tn_acc(av.data(), self.pass_grad.data(), gb->data(), m, k, n);
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  auto x = a.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = x[i * n + j];
  return make_result("transpose", {n, m}, std::move(out), {a}, [m, n](Node& self) {
    auto* ga = sink(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) (*ga)[i * n + j] += self.pass_grad[j * m + i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_binary(a, b, "add");
  const bool bcast = a.shape() != b.shape();
  std::vector<double> out(a.numel());
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[bcast ? 0 : i];
  return make_result("add", a.shape(), std::move(out), {a, b}, [bcast](Node& self) {
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < ga->size(); ++i) (*ga)[i] += self.pass_grad[i];
    if (auto* gb = sink(self, 1)) {
      for (std::size_t i = 0; i < self.pass_grad.size(); ++i) (*gb)[bcast ? 0 : i] += self.pass_grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_binary(a, b, "sub");
  const bool bcast = a.shape() != b.shape();
  std::vector<double> out(a.numel());
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - y[bcast ? 0 : i];
  return make_result("sub", a.shape(), std::move(out), {a, b}, [bcast](Node& self) {
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < ga->size(); ++i) (*ga)[i] += self.pass_grad[i];
    if (auto* gb = sink(self, 1)) {
      for (std::size_t i = 0; i < self.pass_grad.size(); ++i) (*gb)[bcast ? 0 : i] -= self.pass_grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_binary(a, b, "mul");
  const bool bcast = a.shape() != b.shape();
  std::vector<double> out(a.numel());
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[bcast ? 0 : i];
  return make_result("mul", a.shape(), std::move(out), {a, b}, [bcast](Node& self) {
    const auto& x = self.parents[0]->data;
    const auto& y = self.parents[1]->data;
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < ga->size(); ++i) (*ga)[i] += self.pass_grad[i] * y[bcast ? 0 : i];
    if (auto* gb = sink(self, 1))
      for (std::size_t i = 0; i < self.pass_grad.size(); ++i) (*gb)[bcast ? 0 : i] += self.pass_grad[i] * x[i];
  });
}

Tensor scale(const Tensor& a, double factor) {
  return unary("scale", a, [factor](double x) { return x * factor; },
               [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double value) {
  return unary("add_scalar", a, [value](double x) { return x + value; },
               [](double, double) { return 1.0; });
}

Tensor one_minus(const Tensor& a) {
  return unary("one_minus", a, [](double x) { return 1.0 - x; }, [](double, double) { return -1.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      "sigmoid", a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary("tanh", a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& a) {
  return unary("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor add_bias(const Tensor& x, const Tensor& b) {
  require_rank2(x, "add_bias");
  const std::size_t m = x.dim(0), n = x.dim(1);
  if (b.numel() != n || b.rank() > 2 || (b.rank() == 2 && b.dim(0) != 1)) {
    throw DimensionError("add_bias: bias " + shape_str(b.shape()) + " does not match " +
                         shape_str(x.shape()));
  }
  std::vector<double> out(m * n);
  auto xv = x.data();
  auto bv = b.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = xv[i * n + j] + bv[j];
  return make_result("add_bias", {m, n}, std::move(out), {x, b}, [m, n](Node& self) {
    if (auto* gx = sink(self, 0))
      for (std::size_t i = 0; i < m * n; ++i) (*gx)[i] += self.pass_grad[i];
    if (auto* gb = sink(self, 1))
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) (*gb)[j] += self.pass_grad[i * n + j];
  });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return make_result("sum", {}, {s}, {a}, [](Node& self) {
    if (auto* ga = sink(self, 0))
      for (double& g : *ga) g += self.pass_grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.numel())); }

Tensor softmax(const Tensor& x, std::size_t axis) {
  const Shape& shape = x.shape();
  if (axis >= shape.size()) throw DimensionError("softmax: axis out of range for " + shape_str(shape));
  const std::size_t len = shape[axis];
  std::size_t inner = 1;
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const std::size_t outer = x.numel() / (len * inner);

  std::vector<double> out(x.numel());
  auto xv = x.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = xv[base];
      for (std::size_t i = 1; i < len; ++i) mx = std::max(mx, xv[base + i * inner]);
      double z = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double e = std::exp(xv[base + i * inner] - mx);
        out[base + i * inner] = e;
        z += e;
      }
      for (std::size_t i = 0; i < len; ++i) out[base + i * inner] /= z;
    }
  }
  return make_result("softmax", shape, std::move(out), {x}, [outer, inner, len](Node& self) {
    auto* gx = sink(self, 0);
    if (!gx) return;
    const auto& y = self.data;
    const auto& gy = self.pass_grad;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = o * len * inner + in;
        double dot = 0.0;
        for (std::size_t i = 0; i < len; ++i) dot += gy[base + i * inner] * y[base + i * inner];
        for (std::size_t i = 0; i < len; ++i) {
          const std::size_t idx = base + i * inner;
          (*gx)[idx] += y[idx] * (gy[idx] - dot);
        }
      }
    }
  });
}

Tensor layernorm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  if (x.rank() == 0) throw DimensionError("layernorm needs at least one axis");
  const std::size_t d = x.shape().back();
  if (gain.numel() != d || bias.numel() != d) {
    throw DimensionError("layernorm: gain/bias must have " + std::to_string(d) + " elements");
  }
  if (!(eps > 0.0)) throw ConfigError("layernorm: eps must be positive");
  const std::size_t rows = x.numel() / d;
  auto xv = x.data();
  auto gv = gain.data();
  auto bv = bias.data();
  std::vector<double> out(x.numel());
  std::vector<double> xhat(x.numel());
  std::vector<double> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = xv.data() + r * d;
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += row[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(d);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < d; ++j) {
      const double h = (row[j] - mu) * inv_std[r];
      xhat[r * d + j] = h;
      out[r * d + j] = h * gv[j] + bv[j];
    }
  }
  return make_result(
      "layernorm", x.shape(), std::move(out), {x, gain, bias},
      [rows, d, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
        const auto& gv = self.parents[1]->data;
        const auto& gy = self.pass_grad;
        auto* gx = sink(self, 0);
        auto* gg = sink(self, 1);
        auto* gb = sink(self, 2);
        const double dn = static_cast<double>(d);
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t off = r * d;
          if (gg || gb) {
            for (std::size_t j = 0; j < d; ++j) {
              if (gg) (*gg)[j] += gy[off + j] * xhat[off + j];
              if (gb) (*gb)[j] += gy[off + j];
            }
          }
          if (!gx) continue;
          double sum_dh = 0.0, sum_dh_h = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double dh = gy[off + j] * gv[j];
            sum_dh += dh;
            sum_dh_h += dh * xhat[off + j];
          }
          for (std::size_t j = 0; j < d; ++j) {
            const double dh = gy[off + j] * gv[j];
            (*gx)[off + j] += inv_std[r] / dn * (dn * dh - sum_dh - xhat[off + j] * sum_dh_h);
          }
        }
      });
}

Tensor cross_entropy(const Tensor& logits, std::span<const int> labels) {
  require_rank2(logits, "cross_entropy");
  const std::size_t batch = logits.dim(0), classes = logits.dim(1);
  if (labels.size() != batch) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for batch of " +
                         std::to_string(batch));
  }
  auto lv = logits.data();
  std::vector<double> probs(batch * classes);
  std::vector<int> label_copy(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw ConfigError("cross_entropy: label " + std::to_string(y) + " outside [0, " +
                        std::to_string(classes) + ")");
    }
    const double* row = lv.data() + i * classes;
    const double mx = *std::max_element(row, row + classes);
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c) z += std::exp(row[c] - mx);
    const double log_z = std::log(z) + mx;
    for (std::size_t c = 0; c < classes; ++c) probs[i * classes + c] = std::exp(row[c] - log_z);
    total += log_z - row[y];
  }
  const double inv_b = 1.0 / static_cast<double>(batch);
  return make_result("cross_entropy", {}, {total * inv_b}, {logits},
                     [batch, classes, inv_b, probs = std::move(probs),
                      label_copy = std::move(label_copy)](Node& self) {
                       auto* gl = sink(self, 0);
                       if (!gl) return;
                       const double g = self.pass_grad[0] * inv_b;
                       for (std::size_t i = 0; i < batch; ++i) {
                         for (std::size_t c = 0; c < classes; ++c) {
                           const double onehot = static_cast<int>(c) == label_copy[i] ? 1.0 : 0.0;
                           (*gl)[i * classes + c] += g * (probs[i * classes + c] - onehot);
                         }
                       }
                     });
}

Tensor bce(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) {
    throw DimensionError("bce: shape mismatch " + shape_str(pred.shape()) + " vs " +
                         shape_str(target.shape()));
  }
  auto p = pred.data();
  auto t = target.data();
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (t[i] != 0.0 && t[i] != 1.0) throw ConfigError("bce: target values must be 0 or 1");
    const double pc = std::clamp(p[i], kBceClamp, 1.0 - kBceClamp);
    total -= t[i] * std::log(pc) + (1.0 - t[i]) * std::log(1.0 - pc);
  }
  const double inv_n = 1.0 / static_cast<double>(p.size());
  return make_result("bce", {}, {total * inv_n}, {pred, target}, [inv_n](Node& self) {
    auto* gp = sink(self, 0);
    if (!gp) return;
    const auto& p = self.parents[0]->data;
    const auto& t = self.parents[1]->data;
    const double g = self.pass_grad[0] * inv_n;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < kBceClamp || p[i] > 1.0 - kBceClamp) continue;
      (*gp)[i] += g * (-t[i] / p[i] + (1.0 - t[i]) / (1.0 - p[i]));
    }
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw DimensionError("reshape: " + shape_str(a.shape()) + " -> " + shape_str(shape));
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  return make_result("reshape", std::move(shape), std::move(out), {a}, [](Node& self) {
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < ga->size(); ++i) (*ga)[i] += self.pass_grad[i];
  });
}

Tensor concat_rows(const Tensor& top, const Tensor& bottom) {
  require_rank2(top, "concat_rows");
  require_rank2(bottom, "concat_rows");
  if (top.dim(1) != bottom.dim(1)) {
    throw DimensionError("concat_rows: column mismatch " + shape_str(top.shape()) + " vs " +
                         shape_str(bottom.shape()));
  }
  const std::size_t split = top.numel();
  std::vector<double> out(top.data().begin(), top.data().end());
  out.insert(out.end(), bottom.data().begin(), bottom.data().end());
  return make_result("concat_rows", {top.dim(0) + bottom.dim(0), top.dim(1)}, std::move(out),
                     {top, bottom}, [split](Node& self) {
                       if (auto* gt = sink(self, 0))
                         for (std::size_t i = 0; i < split; ++i) (*gt)[i] += self.pass_grad[i];
                       if (auto* gb = sink(self, 1))
                         for (std::size_t i = 0; i < gb->size(); ++i) (*gb)[i] += self.pass_grad[split + i];
                     });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t m = parts[0].dim(0);
  std::vector<std::size_t> widths;
  std::size_t n = 0;
  for (const Tensor& p : parts) {
    require_rank2(p, "concat_cols");
    if (p.dim(0) != m) throw DimensionError("concat_cols: row mismatch");
    widths.push_back(p.dim(1));
    n += p.dim(1);
  }
  std::vector<double> out(m * n);
  std::size_t col = 0;
  for (const Tensor& p : parts) {
    const std::size_t w = p.dim(1);
    auto pv = p.data();
    for (std::size_t i = 0; i < m; ++i)
      std::copy_n(pv.data() + i * w, w, out.data() + i * n + col);
    col += w;
  }
  return make_result("concat_cols", {m, n}, std::move(out), {parts.begin(), parts.end()},
                     [m, n, widths = std::move(widths)](Node& self) {
                       std::size_t col = 0;
                       for (std::size_t k = 0; k < widths.size(); ++k) {
                         const std::size_t w = widths[k];
                         if (auto* g = sink(self, k)) {
                           for (std::size_t i = 0; i < m; ++i)
                             for (std::size_t j = 0; j < w; ++j)
                               (*g)[i * w + j] += self.pass_grad[i * n + col + j];
                         }
                         col += w;
                       }
                     });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end) {
  require_rank2(a, "slice_rows");
  if (begin >= end || end > a.dim(0)) throw DimensionError("slice_rows: bad range");
  const std::size_t n = a.dim(1);
  std::vector<double> out(a.data().begin() + static_cast<std::ptrdiff_t>(begin * n),
                          a.data().begin() + static_cast<std::ptrdiff_t>(end * n));
  return make_result("slice_rows", {end - begin, n}, std::move(out), {a}, [begin, n](Node& self) {
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < self.pass_grad.size(); ++i) (*ga)[begin * n + i] += self.pass_grad[i];
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  require_rank2(a, "slice_cols");
  if (begin >= end || end > a.dim(1)) throw DimensionError("slice_cols: bad range");
  const std::size_t m = a.dim(0), n = a.dim(1), w = end - begin;
  std::vector<double> out(m * w);
  auto av = a.data();
  for (std::size_t i = 0; i < m; ++i) std::copy_n(av.data() + i * n + begin, w, out.data() + i * w);
  return make_result("slice_cols", {m, w}, std::move(out), {a}, [m, n, w, begin](Node& self) {
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < w; ++j) (*ga)[i * n + begin + j] += self.pass_grad[i * w + j];
  });
}

Tensor gather_rows(const Tensor& table, std::span<const std::size_t> indices) {
  require_rank2(table, "gather_rows");
  if (indices.empty()) throw DimensionError("gather_rows: no indices");
  const std::size_t n = table.dim(1);
  std::vector<double> out(indices.size() * n);
  auto tv = table.data();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= table.dim(0)) throw DimensionError("gather_rows: index out of range");
    std::copy_n(tv.data() + indices[i] * n, n, out.data() + i * n);
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_result("gather_rows", {indices.size(), n}, std::move(out), {table},
                     [n, idx = std::move(idx)](Node& self) {
                       auto* gt = sink(self, 0);
                       if (!gt) return;
                       for (std::size_t i = 0; i < idx.size(); ++i)
                         for (std::size_t j = 0; j < n; ++j) (*gt)[idx[i] * n + j] += self.pass_grad[i * n + j];
                     });
}

}  // namespace saccade::ops
