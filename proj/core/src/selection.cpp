// SPDX-License-Identifier: Apache-2.0
#include "saccade/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saccade/error.hpp"
#include "saccade/rng.hpp"

namespace saccade {

Budget Budget::count(std::size_t k) {
  if (k == 0) throw ConfigError("budget must sense at least one patch");
  return Budget(k);
}

Budget Budget::fraction(double f) {
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("budget fraction must lie in (0, 1]");
  return Budget(f);
}

std::size_t Budget::resolve(std::size_t num_patches) const {
  std::size_t k;
  if (is_fraction()) {
    k = static_cast<std::size_t>(std::ceil(fraction_value() * static_cast<double>(num_patches)));
  } else {
    k = std::get<std::size_t>(value_);
  }
  if (k < 1 || k > num_patches) {
    throw ConfigError("budget of " + std::to_string(k) + " patches invalid for " +
                      std::to_string(num_patches) + " patches");
  }
  return k;
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "full") return PolicyKind::full;
  if (name == "random") return PolicyKind::random;
  if (name == "oracle-threshold") return PolicyKind::oracle_threshold;
  if (name == "oracle-topk" || name == "oracle") return PolicyKind::oracle_topk;
  if (name == "learned") return PolicyKind::learned;
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::full: return "full";
    case PolicyKind::random: return "random";
    case PolicyKind::oracle_threshold: return "oracle-threshold";
    case PolicyKind::oracle_topk: return "oracle-topk";
    case PolicyKind::learned: return "learned";
  }
  return "unknown";
}

PatchMask random_select(std::size_t num_patches, const Budget& budget, std::uint64_t seed) {
  const std::size_t k = budget.resolve(num_patches);
  std::vector<std::size_t> idx(num_patches);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(num_patches - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return PatchMask::from_indices(num_patches, idx);
}

std::vector<double> salient_fractions(const PixelMap& saliency, const PatchGrid& grid) {
  if (!grid.matches(saliency)) throw DimensionError("saliency map does not match patch grid");
  const int p = grid.patch_size();
  std::vector<double> out(grid.num_patches());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const PatchRect r = grid.rect(i);
    double s = 0.0;
    for (int y = 0; y < p; ++y)
      for (int x = 0; x < p; ++x) s += saliency.at(r.row0 + y, r.col0 + x);
    out[i] = s / (p * p);
  }
  return out;
}

PatchMask oracle_select(const PixelMap& saliency, const PatchGrid& grid, const OracleMode& mode) {
  const std::vector<double> frac = salient_fractions(saliency, grid);
  if (const auto* th = std::get_if<ThresholdMode>(&mode)) {
    if (!(th->tau >= 0.0 && th->tau <= 1.0)) throw ConfigError("oracle threshold must lie in [0, 1]");
    PatchMask mask(frac.size());
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (th->tau == 0.0 ? frac[i] > 0.0 : frac[i] >= th->tau) mask.set(i);
    }
    return mask;
  }
  return topk_select(Heatmap{frac}, std::get<Budget>(mode));
}

PatchMask topk_select(const Heatmap& heatmap, const Budget& budget) {
  const std::size_t n = heatmap.scores.size();
  const std::size_t k = budget.resolve(n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double sa = heatmap.scores[a], sb = heatmap.scores[b];
                      return sa != sb ? sa > sb : a < b;
                    });
  idx.resize(k);
  return PatchMask::from_indices(n, idx);
}

}  // namespace saccade
