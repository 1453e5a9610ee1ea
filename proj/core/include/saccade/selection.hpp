// SPDX-License-Identifier: Apache-2.0
//
// Patch selection policies. Every policy resolves to a PatchMask; in budget
// mode each emits exactly k sensed patches. Ties are always broken by
// ascending patch index.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "saccade/sensor.hpp"

namespace saccade {

/// Sensing budget: a patch count or a fraction f in (0, 1] resolved as
/// k = ceil(f · patches).
class Budget {
 public:
  static Budget count(std::size_t k);
  static Budget fraction(double f);

  /// Throws ConfigError unless 1 <= k <= num_patches.
  std::size_t resolve(std::size_t num_patches) const;

  bool is_fraction() const { return std::holds_alternative<double>(value_); }
  double fraction_value() const { return std::get<double>(value_); }

 private:
  explicit Budget(std::variant<std::size_t, double> v) : value_(v) {}
  std::variant<std::size_t, double> value_;
};

struct Heatmap {
  std::vector<double> scores;  // one per patch, in [0, 1]
};

enum class PolicyKind { full, random, oracle_threshold, oracle_topk, learned };

/// "full", "random", "oracle-threshold", "oracle-topk", "learned".
PolicyKind parse_policy(std::string_view name);
std::string_view policy_name(PolicyKind kind);

PatchMask random_select(std::size_t num_patches, const Budget& budget, std::uint64_t seed);

/// Mean saliency over each patch.
std::vector<double> salient_fractions(const PixelMap& saliency, const PatchGrid& grid);

struct ThresholdMode {
  double tau = 0.0;
};
using OracleMode = std::variant<ThresholdMode, Budget>;

/// Threshold mode senses {i : s_i >= tau} for tau > 0 and {i : s_i > 0}
/// for tau == 0. Budget mode is topk_select over the salient fractions.
PatchMask oracle_select(const PixelMap& saliency, const PatchGrid& grid, const OracleMode& mode);

PatchMask topk_select(const Heatmap& heatmap, const Budget& budget);

}  // namespace saccade
