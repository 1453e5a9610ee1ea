// SPDX-License-Identifier: Apache-2.0
#include "saccade/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "saccade/error.hpp"

namespace saccade {

MetricReport accuracy_curve(const MaskedPredictor& predict, const MaskSource& masks, std::span<const int> labels,
                            std::span<const double> budgets) {
  if (labels.empty()) throw ConfigError("accuracy_curve: empty dataset");
  if (!std::is_sorted(budgets.begin(), budgets.end())) throw ConfigError("accuracy_curve: budgets must be ascending");
  MetricReport report;
  report.name = "accuracy";
  report.axis_name = "budget";
  for (double b : budgets) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (predict(i, masks(i, b)) == labels[i]) ++correct;
    }
    report.axis.push_back(b);
    report.values.push_back(static_cast<double>(correct) / static_cast<double>(labels.size()));
  }
  return report;
}

double auroc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw DimensionError("auroc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) throw MetricError("auroc: labels must be 0 or 1");
    if (labels[i] == 1.0) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) throw MetricError("auroc: undefined without both positive and negative labels");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

namespace {

struct RankedDet {
  double confidence;
  std::size_t image;
  std::size_t index;
};

std::vector<RankedDet> rank_detections(std::span<const ImageDetections> images, std::size_t per_image_cap) {
  std::vector<RankedDet> all;
  for (std::size_t im = 0; im < images.size(); ++im) {
    std::vector<RankedDet> local;
    for (std::size_t d = 0; d < images[im].detections.size(); ++d) {
      local.push_back({images[im].detections[d].confidence, im, d});
    }
    std::stable_sort(local.begin(), local.end(),
                     [](const RankedDet& a, const RankedDet& b) { return a.confidence > b.confidence; });
    if (local.size() > per_image_cap) local.resize(per_image_cap);
    all.insert(all.end(), local.begin(), local.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const RankedDet& a, const RankedDet& b) { return a.confidence > b.confidence; });
  return all;
}

// True-positive flag per ranked detection.
std::vector<bool> match_detections(std::span<const ImageDetections> images, const std::vector<RankedDet>& ranked,
                                   double iou_threshold) {
  std::vector<std::vector<bool>> taken(images.size());
  for (std::size_t im = 0; im < images.size(); ++im) taken[im].assign(images[im].ground_truth.size(), false);
  std::vector<bool> tp(ranked.size(), false);
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& img = images[ranked[r].image];
    const Box& box = img.detections[ranked[r].index].box;
    double best = -1.0;
    std::size_t best_gt = 0;
    for (std::size_t g = 0; g < img.ground_truth.size(); ++g) {
      if (taken[ranked[r].image][g]) continue;
      const double v = iou(box, img.ground_truth[g]);
      if (v >= iou_threshold && v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best >= 0.0) {
      taken[ranked[r].image][best_gt] = true;
      tp[r] = true;
    }
  }
  return tp;
}

std::size_t total_gt(std::span<const ImageDetections> images) {
  std::size_t n = 0;
  for (const auto& im : images) n += im.ground_truth.size();
  return n;
}

}  // namespace

double average_precision(std::span<const ImageDetections> images, double iou_threshold) {
  const std::size_t n_gt = total_gt(images);
  const auto ranked = rank_detections(images, SIZE_MAX);
  if (n_gt == 0) return ranked.empty() ? 1.0 : 0.0;
  if (ranked.empty()) return 0.0;
  const auto tp = match_detections(images, ranked, iou_threshold);

  std::vector<double> precision(ranked.size()), recall(ranked.size());
  double tps = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (tp[i]) tps += 1.0;
    precision[i] = tps / static_cast<double>(i + 1);
    recall[i] = tps / static_cast<double>(n_gt);
  }
  // Monotone envelope from the right.
  for (std::size_t i = ranked.size() - 1; i-- > 0;) precision[i] = std::max(precision[i], precision[i + 1]);
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

double average_recall(std::span<const ImageDetections> images, double iou_threshold, std::size_t max_detections) {
  const std::size_t n_gt = total_gt(images);
  if (n_gt == 0) return 1.0;
  const auto ranked = rank_detections(images, max_detections);
  const auto tp = match_detections(images, ranked, iou_threshold);
  const auto hits = static_cast<double>(std::count(tp.begin(), tp.end(), true));
  return hits / static_cast<double>(n_gt);
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.5 + 0.05 * i);
  return t;
}

double mean_ap(std::span<const ImageDetections> images, std::span<const double> thresholds) {
  if (thresholds.empty()) throw ConfigError("mean_ap: no thresholds");
  double s = 0.0;
  for (double t : thresholds) s += average_precision(images, t);
  return s / static_cast<double>(thresholds.size());
}

double mean_ar(std::span<const ImageDetections> images, std::size_t max_detections,
               std::span<const double> thresholds) {
  if (thresholds.empty()) throw ConfigError("mean_ar: no thresholds");
  double s = 0.0;
  for (double t : thresholds) s += average_recall(images, t, max_detections);
  return s / static_cast<double>(thresholds.size());
}

MotTally& MotTally::operator+=(const MotTally& o) {
  misses += o.misses;
  false_positives += o.false_positives;
  id_switches += o.id_switches;
  matches += o.matches;
  total_gt += o.total_gt;
  distance_sum += o.distance_sum;
  return *this;
}

MotResult mot_from_tally(const MotTally& tally) {
  MotResult r;
  r.tally = tally;
  const double errors = static_cast<double>(tally.misses + tally.false_positives + tally.id_switches);
  if (tally.total_gt > 0) {
    r.mota = 1.0 - errors / static_cast<double>(tally.total_gt);
  } else {
    r.mota = errors == 0.0 ? 1.0 : 0.0;
  }
  // No matches: report the worst possible distance.
  r.motp = tally.matches > 0 ? tally.distance_sum / static_cast<double>(tally.matches) : 1.0;
  return r;
}

namespace {

void check_unique_ids(const std::vector<IdBox>& objs, std::size_t frame, const char* which) {
  std::set<int> ids;
  for (const IdBox& o : objs) {
    if (!ids.insert(o.id).second) {
      throw ConfigError(std::string("clear_mot: id ") + std::to_string(o.id) + " repeated in " + which +
                        " frame " + std::to_string(frame));
    }
  }
}

}  // namespace

MotResult clear_mot(const MotFrames& gt, const MotFrames& hyp, double iou_min) {
  if (gt.size() != hyp.size()) throw ConfigError("clear_mot: sequences cover different frame ranges");
  MotTally tally;
  std::map<int, int> last_match;  // gt id -> hyp id
  for (std::size_t f = 0; f < gt.size(); ++f) {
    const auto& g = gt[f];
    const auto& h = hyp[f];
    check_unique_ids(g, f, "ground-truth");
    check_unique_ids(h, f, "hypothesis");
    std::vector<bool> g_used(g.size(), false), h_used(h.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> matched;

    // Keep correspondences that still overlap enough.
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto it = last_match.find(g[i].id);
      if (it == last_match.end()) continue;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (h_used[j] || h[j].id != it->second) continue;
        if (iou(g[i].box, h[j].box) >= iou_min) {
          g_used[i] = h_used[j] = true;
          matched.emplace_back(i, j);
        }
        break;
      }
    }

    struct Pair {
      double iou;
      std::size_t g, h;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g_used[i]) continue;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (h_used[j]) continue;
        const double v = iou(g[i].box, h[j].box);
        if (v >= iou_min) pairs.push_back({v, i, j});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (a.iou != b.iou) return a.iou > b.iou;
      if (g[a.g].id != g[b.g].id) return g[a.g].id < g[b.g].id;
      return h[a.h].id < h[b.h].id;
    });
    for (const Pair& p : pairs) {
      if (g_used[p.g] || h_used[p.h]) continue;
      g_used[p.g] = h_used[p.h] = true;
      matched.emplace_back(p.g, p.h);
    }

    for (const auto& [i, j] : matched) {
      auto it = last_match.find(g[i].id);
      if (it != last_match.end() && it->second != h[j].id) ++tally.id_switches;
      last_match[g[i].id] = h[j].id;
      tally.distance_sum += 1.0 - iou(g[i].box, h[j].box);
    }
    tally.matches += matched.size();
    tally.total_gt += g.size();
    tally.misses += g.size() - matched.size();
    tally.false_positives += h.size() - matched.size();
  }
  return mot_from_tally(tally);
}

MotFrames gt_mot_frames(const GroundTruth& truth) {
  MotFrames out(truth.frames.size());
  for (std::size_t t = 0; t < truth.frames.size(); ++t)
    for (const ObjectTruth& o : truth.frames[t].objects) out[t].push_back({o.id, o.box});
  return out;
}

MotFrames tracks_to_mot_frames(const std::vector<Track>& tracks, std::size_t num_frames) {
  MotFrames out(num_frames);
  for (const Track& t : tracks)
    for (const auto& [frame, box] : t.history) {
      if (frame < 0 || static_cast<std::size_t>(frame) >= num_frames) throw ConfigError("track frame out of range");
      out[static_cast<std::size_t>(frame)].push_back({t.id, box});
    }
  return out;
}

}  // namespace saccade
