// SPDX-License-Identifier: Apache-2.0
#include "saccade/classifier.hpp"

#include <algorithm>
#include <numeric>

#include "saccade/error.hpp"
#include "saccade/ops.hpp"
#include "saccade/rng.hpp"
#include "saccade/saccade_loop.hpp"

namespace saccade {

ClassificationSet::ClassificationSet(std::vector<Video> videos) : videos_(std::move(videos)) {
  for (std::size_t v = 0; v < videos_.size(); ++v) {
    if (!videos_[v].truth) throw ConfigError("classification set needs annotated videos");
    for (std::size_t t = 0; t < videos_[v].frames.size(); ++t) {
      index_.emplace_back(v, t);
      labels_.push_back(videos_[v].truth->frames[t].label);
    }
  }
}

const Frame& ClassificationSet::frame(std::size_t i) const {
  const auto [v, t] = index_.at(i);
  return videos_[v].frames[t];
}

PixelMap ClassificationSet::attention(std::size_t i) const {
  const auto [v, t] = index_.at(i);
  return videos_[v].truth->attention(t);
}

MaskProvider::MaskProvider(const ClassificationSet& set, PatchGrid grid, PolicySpec spec,
                           std::optional<LearnedPolicy> learned)
    : set_(&set), grid_(grid), spec_(spec), learned_(std::move(learned)) {
  if (spec_.kind == PolicyKind::learned && (!learned_ || !learned_->params)) {
    throw ConfigError("learned policy needs trained saccade parameters");
  }
}

PatchMask MaskProvider::mask(std::size_t sample, double budget, std::uint64_t salt) const {
  const std::size_t n = grid_.num_patches();
  if (budget >= 1.0 || spec_.kind == PolicyKind::full) return PatchMask::all(n);
  const Budget b = Budget::fraction(budget);
  switch (spec_.kind) {
    case PolicyKind::full:
      return PatchMask::all(n);
    case PolicyKind::random: {
      const std::uint64_t budget_key = static_cast<std::uint64_t>(std::llround(budget * 1e6));
      const std::uint64_t seed = Rng::mix(Rng::mix(Rng::mix(spec_.seed, sample), budget_key), salt);
      return random_select(n, b, seed);
    }
    case PolicyKind::oracle_threshold:
      return oracle_select(set_->attention(sample), grid_, ThresholdMode{spec_.threshold});
    case PolicyKind::oracle_topk:
      return oracle_select(set_->attention(sample), grid_, b);
    case PolicyKind::learned: {
      auto it = learned_cache_.find(budget);
      if (it == learned_cache_.end()) {
        std::vector<std::vector<PatchMask>> per_video;
        for (const Video& v : set_->videos()) {
          SaccadeTrace trace = infer_saccade_video(v, *learned_->params, learned_->config, grid_, b);
          std::vector<PatchMask> masks;
          for (auto& e : trace.frames) masks.push_back(std::move(e.mask));
          per_video.push_back(std::move(masks));
        }
        std::vector<PatchMask> flat;
        for (std::size_t i = 0; i < set_->size(); ++i) flat.push_back(per_video[set_->video_of(i)][set_->frame_of(i)]);
        it = learned_cache_.emplace(budget, std::move(flat)).first;
      }
      return it->second.at(sample);
    }
  }
  throw ConfigError("unhandled policy");
}

ClassifierKind parse_classifier_kind(const std::string& name) {
  if (name == "vit") return ClassifierKind::vit;
  if (name == "dense") return ClassifierKind::dense;
  throw ConfigError("unknown classifier '" + name + "' (expected vit or dense)");
}

Classifier Classifier::make_vit(const ViTConfig& config, std::uint64_t seed) {
  Classifier c;
  c.kind = ClassifierKind::vit;
  c.vit = config;
  c.params = init_vit_params(config, seed);
  return c;
}

Classifier Classifier::make_dense(const DenseConfig& config, std::uint64_t seed) {
  Classifier c;
  c.kind = ClassifierKind::dense;
  c.dense = config;
  c.params = init_dense_params(config, seed);
  return c;
}

Tensor Classifier::logits(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) const {
  if (kind == ClassifierKind::vit) {
    const auto tokens = extract_tokens(frame, grid, mask);
    return vit_forward(tokens, params, vit);
  }
  return dense_forward(zero_fill(frame, grid, mask), params, dense);
}

int Classifier::predict(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) const {
  NoGradGuard no_grad;
  const Tensor out = logits(frame, grid, mask);
  const auto v = out.data();
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

ClassifierEpochStats train_classifier_epoch(const ClassificationSet& set, const MaskProvider& masks,
                                            Classifier& model, double budget, const ClassifierTrainConfig& config,
                                            Rng& rng, std::uint64_t epoch) {
  if (set.size() == 0) throw ConfigError("classifier training set is empty");
  if (config.batch_size == 0) throw ConfigError("batch size must be positive");
  if (config.min_budget && !(*config.min_budget > 0.0 && *config.min_budget <= budget)) {
    throw ConfigError("min_budget must lie in (0, budget]");
  }
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));

  const PatchGrid& grid = masks.grid();
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
    const std::size_t end = std::min(order.size(), begin + config.batch_size);
    const double weight = 1.0 / static_cast<double>(end - begin);
    model.params.zero_grads();
    for (std::size_t pos = begin; pos < end; ++pos) {
      const std::size_t i = order[pos];
      const double b = config.min_budget ? rng.uniform(*config.min_budget, budget) : budget;
      const Tensor logits = model.logits(set.frame(i), grid, masks.mask(i, b, epoch));
      const int label = set.label(i);
      const Tensor loss = ops::cross_entropy(logits, std::span(&label, 1));
      ops::scale(loss, weight).backward();
      loss_sum += loss.item();
      const auto v = logits.data();
      if (std::max_element(v.begin(), v.end()) - v.begin() == label) ++correct;
    }
    model.params.adam_step(config.adam);
  }
  return {loss_sum / static_cast<double>(set.size()), static_cast<double>(correct) / static_cast<double>(set.size())};
}

double evaluate_accuracy(const ClassificationSet& set, const MaskProvider& masks, const Classifier& model,
                         double budget) {
  const double budgets[] = {budget};
  return classifier_accuracy_curve(set, masks, model, budgets).values.front();
}

MetricReport classifier_accuracy_curve(const ClassificationSet& set, const MaskProvider& masks,
                                       const Classifier& model, std::span<const double> budgets) {
  MaskedPredictor predict = [&](std::size_t i, const PatchMask& mask) {
    return model.predict(set.frame(i), masks.grid(), mask);
  };
  MaskSource source = [&](std::size_t i, double budget) { return masks.mask(i, budget); };
  MetricReport report = accuracy_curve(predict, source, set.labels(), budgets);
  report.metadata["policy"] = std::string(policy_name(masks.spec().kind));
  report.metadata["model"] = model.kind == ClassifierKind::vit ? "vit" : "dense";
  return report;
}

}  // namespace saccade
