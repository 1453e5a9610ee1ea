#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "saccade/error.hpp"
#include "saccade/grad_check.hpp"
#include "saccade/ops.hpp"
#include "saccade/param_store.hpp"
#include "saccade/rng.hpp"

using namespace saccade;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

void expect_values(const Tensor& t, const std::vector<double>& want, double tol) {
  ASSERT_EQ(t.numel(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(t.at(i), want[i], tol) << "element " << i;
}

}  // namespace

TEST(Matmul, IdentityLeavesMatrix) {
  auto eye = Tensor::from({2, 2}, {1, 0, 0, 1});
  auto m = Tensor::from({2, 2}, {1, 2, 3, 4});
  expect_values(ops::matmul(eye, m), {1, 2, 3, 4}, 0.0);
}

TEST(Matmul, RowTimesColumn) {
  auto out = ops::matmul(Tensor::from({1, 2}, {1, 2}), Tensor::from({2, 1}, {3, 4}));
  EXPECT_EQ(out.shape(), (Shape{1, 1}));
  EXPECT_EQ(out.item(), 11.0);
}

TEST(Matmul, MatchesTripleLoop) {
  const auto a = random_values(12, 1), b = random_values(8, 2);
  auto out = ops::matmul(Tensor::from({3, 4}, a), Tensor::from({4, 2}, b));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += a[i * 4 + k] * b[k * 2 + j];
      EXPECT_NEAR(out.at(i, j), acc, 1e-12);
    }
  }
}

TEST(Matmul, ShapeMismatchThrows) {
  EXPECT_THROW(ops::matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3})), DimensionError);
}

TEST(Elementwise, ScalarIdentities) {
  EXPECT_EQ(ops::elementwise("sigmoid", Tensor::scalar(0.0)).item(), 0.5);
  EXPECT_EQ(ops::elementwise("tanh", Tensor::scalar(0.0)).item(), 0.0);
  auto b = Tensor::row({3, 4});
  expect_values(ops::elementwise("add", Tensor::row({1, 2}), &b), {4, 6}, 0.0);
}

TEST(Elementwise, BadTagAndMissingOperand) {
  EXPECT_THROW(ops::parse_elementwise("gelu"), ConfigError);
  EXPECT_THROW(ops::elementwise(ops::Elementwise::mul, Tensor::row({1})), Error);
  auto b = Tensor::row({1, 2, 3});
  EXPECT_THROW(ops::add(Tensor::row({1, 2}), b), DimensionError);
}

TEST(Elementwise, NonFiniteInputRaises) {
  EXPECT_THROW(ops::sigmoid(Tensor::row({std::nan("")})), NumericError);
}

TEST(Softmax, Cases) {
  expect_values(ops::softmax(Tensor::row({0, 0}), 1), {0.5, 0.5}, 1e-15);
  expect_values(ops::softmax(Tensor::row({1000, 1000}), 1), {0.5, 0.5}, 1e-15);
  expect_values(ops::softmax(Tensor::row({std::log(1.0), std::log(2.0), std::log(3.0)}), 1),
                {1.0 / 6, 2.0 / 6, 3.0 / 6}, 1e-12);
}

TEST(Softmax, RowsSumToOne) {
  auto out = ops::softmax(Tensor::from({4, 5}, random_values(20, 3, -30, 30)), 1);
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 5; ++c) s += out.at(r, c);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Layernorm, ConstantRowGivesZeros) {
  auto out = ops::layernorm(Tensor::row({1, 1, 1, 1}), Tensor::full({4}, 1.0), Tensor::zeros({4}));
  expect_values(out, {0, 0, 0, 0}, 0.0);
}

TEST(Layernorm, AlreadyNormalised) {
  auto out = ops::layernorm(Tensor::row({-1, 1}), Tensor::full({2}, 1.0), Tensor::zeros({2}), 1e-12);
  expect_values(out, {-1, 1}, 1e-9);
}

TEST(Layernorm, RandomRowMoments) {
  const std::size_t d = 64;
  auto out = ops::layernorm(Tensor::row(random_values(d, 4, -5, 5)), Tensor::full({d}, 1.0), Tensor::zeros({d}));
  double mean = 0.0, var = 0.0;
  for (double v : out.data()) mean += v;
  mean /= d;
  for (double v : out.data()) var += (v - mean) * (v - mean);
  var /= d;
  EXPECT_LT(std::abs(mean), 1e-10);
  EXPECT_LT(std::abs(var - 1.0), 1e-3);
}

TEST(CrossEntropy, Cases) {
  const int label = 2;
  EXPECT_NEAR(ops::cross_entropy(Tensor::row({0, 0, 0, 0}), std::span(&label, 1)).item(), std::log(4.0), 1e-12);
  EXPECT_NEAR(ops::cross_entropy(Tensor::row({0, 0, 1000, 0}), std::span(&label, 1)).item(), 0.0, 1e-12);

  // Two rows by hand: mean of -log softmax at the labelled entries.
  const int labels[] = {0, 1};
  auto logits = Tensor::from({2, 2}, {1, 0, 0, 3});
  const double want = 0.5 * (std::log(1 + std::exp(-1.0)) + std::log(1 + std::exp(-3.0)));
  EXPECT_NEAR(ops::cross_entropy(logits, labels).item(), want, 1e-12);
}

TEST(CrossEntropy, LabelOutOfRange) {
  const int label = 4;
  EXPECT_THROW(ops::cross_entropy(Tensor::row({0, 0, 0, 0}), std::span(&label, 1)), ConfigError);
}

TEST(Bce, Cases) {
  EXPECT_NEAR(ops::bce(Tensor::row({0.5}), Tensor::row({1})).item(), std::log(2.0), 1e-12);
  EXPECT_LE(ops::bce(Tensor::row({1, 0, 1}), Tensor::row({1, 0, 1})).item(), 1.01e-7);
  EXPECT_NEAR(ops::bce(Tensor::row({0.9, 0.2}), Tensor::row({1, 0})).item(),
              (-std::log(0.9) - std::log(0.8)) / 2, 1e-12);
}

TEST(Backward, SumGivesOnes) {
  auto w = Tensor::row({1, -2, 3}, true);
  ops::sum(w).backward();
  for (double g : w.grad()) EXPECT_EQ(g, 1.0);
}

TEST(Backward, SquareGivesTwiceValue) {
  auto w = Tensor::scalar(1.5, true);
  ops::mul(w, w).backward();
  EXPECT_EQ(w.grad()[0], 3.0);
}

TEST(Backward, RepeatedPassDoublesGradient) {
  auto w = Tensor::row({0.3, -0.7}, true);
  auto loss = ops::sum(ops::mul(ops::tanh(w), w));
  loss.backward();
  const std::vector<double> once(w.grad().begin(), w.grad().end());
  loss.backward();
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(w.grad()[i], 2.0 * once[i]);
}

TEST(Backward, NoGradGuardBuildsNoGraph) {
  auto w = Tensor::row({1, 2}, true);
  NoGradGuard guard;
  auto y = ops::sum(ops::mul(w, w));
  EXPECT_FALSE(y.requires_grad());
}

// Central differences on each op through the library's checker, so that a
// broken backward shows up per op rather than inside a model.
class OpGradient : public ::testing::TestWithParam<int> {};

TEST_P(OpGradient, MatchesFiniteDifferences) {
  ParamStore p;
  p.add("a", Tensor::from({3, 4}, random_values(12, 10)));
  p.add("b", Tensor::from({3, 4}, random_values(12, 11)));
  p.add("m", Tensor::from({4, 2}, random_values(8, 12)));
  p.add("g", Tensor::from({4}, random_values(4, 13, 0.5, 1.5)));
  p.add("bias", Tensor::from({4}, random_values(4, 14)));
  const auto w = Tensor::from({3, 2}, random_values(6, 15));
  const int labels[] = {1, 0, 2, 2};
  const auto target = Tensor::from({3, 4}, {1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1});
  std::function<Tensor()> fn;
  switch (GetParam()) {
    case 0: fn = [&] { return ops::sum(ops::mul(ops::matmul(p.get("a"), p.get("m")), w)); }; break;
    case 1: fn = [&] { return ops::sum(ops::mul(ops::sigmoid(p.get("a")), p.get("b"))); }; break;
    case 2: fn = [&] { return ops::sum(ops::mul(ops::tanh(p.get("a")), p.get("b"))); }; break;
    case 3: fn = [&] { return ops::sum(ops::mul(ops::relu(p.get("a")), p.get("b"))); }; break;
    case 4: fn = [&] { return ops::sum(ops::mul(ops::softmax(p.get("a"), 1), p.get("b"))); }; break;
    case 5: fn = [&] { return ops::sum(ops::mul(ops::layernorm(p.get("a"), p.get("g"), p.get("bias")), p.get("b"))); }; break;
    case 6: fn = [&] { return ops::cross_entropy(ops::transpose(p.get("a")), labels); }; break;
    case 7: fn = [&] { return ops::bce(ops::sigmoid(p.get("a")), target); }; break;
    case 8: fn = [&] { return ops::mean(ops::mul(ops::add_bias(p.get("a"), p.get("bias")), p.get("b"))); }; break;
    case 9: fn = [&] {
        Tensor parts[] = {ops::slice_cols(p.get("a"), 1, 3), ops::slice_rows(p.get("b"), 0, 3)};
        const std::size_t rows[] = {2, 0, 2};
        return ops::sum(ops::mul(ops::gather_rows(ops::concat_cols(parts), rows),
                                 ops::gather_rows(ops::concat_cols(parts), rows)));
      };
      break;
  }
  const auto report = grad_check(fn, p);
  EXPECT_TRUE(report.passed) << report.worst_param << " " << report.worst;
  EXPECT_LT(report.worst, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Ops, OpGradient, ::testing::Range(0, 10));

TEST(GradCheck, LinearModelIsExact) {
  ParamStore p;
  p.add("w", Tensor::from({3, 1}, {0.2, -0.4, 0.9}));
  const auto x = Tensor::from({2, 3}, {1, 2, 3, -1, 0.5, 2});
  const auto report = grad_check([&] { return ops::sum(ops::matmul(x, p.get("w"))); }, p);
  EXPECT_LT(report.worst, 1e-7);
}
