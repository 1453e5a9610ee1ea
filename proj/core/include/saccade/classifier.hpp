// SPDX-License-Identifier: Apache-2.0
//
// Frame classification under a sensing policy: the token ViT consumes only
// sensed patches, the dense baseline consumes the zero-filled frame.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "saccade/datagen.hpp"
#include "saccade/dense.hpp"
#include "saccade/gru.hpp"
#include "saccade/metrics.hpp"
#include "saccade/param_store.hpp"
#include "saccade/rng.hpp"
#include "saccade/selection.hpp"
#include "saccade/vit.hpp"

namespace saccade {

/// Flat view of every frame of a set of annotated videos; the label of a
/// frame is the class of its attended object.
class ClassificationSet {
 public:
  explicit ClassificationSet(std::vector<Video> videos);

  std::size_t size() const { return index_.size(); }
  const Frame& frame(std::size_t i) const;
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  PixelMap attention(std::size_t i) const;
  std::size_t video_of(std::size_t i) const { return index_[i].first; }
  std::size_t frame_of(std::size_t i) const { return index_[i].second; }
  const std::vector<Video>& videos() const { return videos_; }

 private:
  std::vector<Video> videos_;
  std::vector<std::pair<std::size_t, std::size_t>> index_;
  std::vector<int> labels_;
};

struct LearnedPolicy {
  const ParamStore* params = nullptr;
  GRUConfig config;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::full;
  double threshold = 0.1;  // oracle-threshold only
  std::uint64_t seed = 0;  // random only
};

/// Produces the mask each policy would sense for a sample. Any budget
/// >= 1 yields the full mask regardless of policy. Random masks are
/// reseeded per (sample, budget, salt); learned masks come from running
/// the saccade protocol over each whole video and are cached per budget.
class MaskProvider {
 public:
  MaskProvider(const ClassificationSet& set, PatchGrid grid, PolicySpec spec,
               std::optional<LearnedPolicy> learned = std::nullopt);

  PatchMask mask(std::size_t sample, double budget, std::uint64_t salt = 0) const;
  const PatchGrid& grid() const { return grid_; }
  const PolicySpec& spec() const { return spec_; }

 private:
  const ClassificationSet* set_;
  PatchGrid grid_;
  PolicySpec spec_;
  std::optional<LearnedPolicy> learned_;
  mutable std::map<double, std::vector<PatchMask>> learned_cache_;
};

enum class ClassifierKind { vit, dense };
ClassifierKind parse_classifier_kind(const std::string& name);

struct Classifier {
  ClassifierKind kind = ClassifierKind::vit;
  ViTConfig vit;
  DenseConfig dense;
  ParamStore params;

  static Classifier make_vit(const ViTConfig& config, std::uint64_t seed);
  static Classifier make_dense(const DenseConfig& config, std::uint64_t seed);

  /// [1 × classes]
  Tensor logits(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) const;
  /// Arg-max class, lowest index on ties.
  int predict(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) const;
};

struct ClassifierTrainConfig {
  AdamConfig adam;
  std::size_t batch_size = 16;
  /// When set, each sample's budget is drawn uniformly from
  /// [min_budget, budget] (masking augmentation).
  std::optional<double> min_budget;
};

struct ClassifierEpochStats {
  double loss = 0.0;
  double accuracy = 0.0;  // on the training samples, before each batch update
};

/// One shuffled pass; masks are drawn from `masks` at `budget` with the
/// epoch number as salt.
ClassifierEpochStats train_classifier_epoch(const ClassificationSet& set, const MaskProvider& masks,
                                            Classifier& model, double budget, const ClassifierTrainConfig& config,
                                            Rng& rng, std::uint64_t epoch);

double evaluate_accuracy(const ClassificationSet& set, const MaskProvider& masks, const Classifier& model,
                         double budget);

MetricReport classifier_accuracy_curve(const ClassificationSet& set, const MaskProvider& masks,
                                       const Classifier& model, std::span<const double> budgets);

}  // namespace saccade
