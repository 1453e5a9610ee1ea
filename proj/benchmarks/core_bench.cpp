#include <benchmark/benchmark.h>

#include "saccade/datagen.hpp"
#include "saccade/gru.hpp"
#include "saccade/ops.hpp"
#include "saccade/rng.hpp"
#include "saccade/selection.hpp"
#include "saccade/vit.hpp"

using namespace saccade;

namespace {

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  std::vector<double> v(r * c);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from({r, c}, std::move(v));
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Tensor a = random_matrix(n, n, rng), b = random_matrix(n, n, rng);
  NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(ops::matmul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(16, 128);

// Forward cost grows with the number of sensed patches.
void BM_VitForward(benchmark::State& state) {
  ViTConfig c;
  c.dim = 32;
  c.heads = 2;
  c.blocks = 2;
  c.mlp_dim = 64;
  const ParamStore p = init_vit_params(c, 1);
  SceneConfig s;
  s.patch_size = 8;
  const Video v = generate_video(s);
  const PatchGrid grid(v.frames[0].width, v.frames[0].height, 8);
  const auto tokens = extract_tokens(v.frames[0], grid, random_select(grid.num_patches(), Budget::count(state.range(0)), 3));
  NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(vit_forward(tokens, p, c));
}
BENCHMARK(BM_VitForward)->Arg(4)->Arg(8)->Arg(16);

void BM_GruStep(benchmark::State& state) {
  const GRUConfig c{2, 64, static_cast<std::size_t>(state.range(0))};
  const ParamStore p = init_gru_params(c, 1);
  Rng rng(2);
  const Tensor x = random_matrix(1, c.input_dim(), rng);
  const Tensor h = Tensor::zeros({1, c.hidden});
  NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(gru_step(x, h, p, c));
}
BENCHMARK(BM_GruStep)->Arg(64)->Arg(128);

void BM_TopK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Heatmap hm{std::vector<double>(n)};
  for (double& x : hm.scores) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(topk_select(hm, Budget::fraction(0.3)));
}
BENCHMARK(BM_TopK)->Arg(64)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
