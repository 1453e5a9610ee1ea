// SPDX-License-Identifier: Apache-2.0
//
// Evaluation instruments: accuracy-vs-budget curves, AUROC of heatmaps,
// AP/AR for detections and CLEAR-MOT tracking scores. Matching inside AP
// and CLEAR-MOT is greedy (not Hungarian) and deterministic.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "saccade/box.hpp"
#include "saccade/report.hpp"
#include "saccade/sensor.hpp"
#include "saccade/tracking.hpp"

namespace saccade {

// --- classification --------------------------------------------------------

/// Predicts a class for sample `i` given the mask to apply.
using MaskedPredictor = std::function<int(std::size_t sample, const PatchMask& mask)>;
/// Mask for sample `i` at budget fraction `budget`.
using MaskSource = std::function<PatchMask(std::size_t sample, double budget)>;

/// Mean top-1 accuracy per budget. Budgets must be sorted ascending.
MetricReport accuracy_curve(const MaskedPredictor& predict, const MaskSource& masks, std::span<const int> labels,
                            std::span<const double> budgets);

// --- heatmaps --------------------------------------------------------------

/// Probability that a random positive outranks a random negative, ties
/// counted half (midrank). Throws MetricError unless both classes occur.
double auroc(std::span<const double> scores, std::span<const double> labels);

// --- detection -------------------------------------------------------------

struct ImageDetections {
  std::vector<Detection> detections;
  std::vector<Box> ground_truth;
};

/// All-points interpolated AP at one IoU threshold. Detections are matched
/// greedily by descending confidence to the best unmatched GT box.
/// No GT and no detections gives 1; GT without detections gives 0.
double average_precision(std::span<const ImageDetections> images, double iou_threshold);
/// Recall using at most `max_detections` per image (highest confidence).
double average_recall(std::span<const ImageDetections> images, double iou_threshold, std::size_t max_detections);

/// 0.50, 0.55, ..., 0.95
std::vector<double> coco_iou_thresholds();
double mean_ap(std::span<const ImageDetections> images, std::span<const double> thresholds);
double mean_ar(std::span<const ImageDetections> images, std::size_t max_detections,
               std::span<const double> thresholds);

// --- tracking --------------------------------------------------------------

struct IdBox {
  int id = 0;
  Box box;
};
/// Per-frame object lists; index = frame.
using MotFrames = std::vector<std::vector<IdBox>>;

struct MotTally {
  std::uint64_t misses = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t id_switches = 0;
  std::uint64_t matches = 0;
  std::uint64_t total_gt = 0;
  double distance_sum = 0.0;  // sum of (1 - IoU) over matches

  MotTally& operator+=(const MotTally& other);
};

struct MotResult {
  double mota = 0.0;
  double motp = 0.0;  // mean (1 - IoU); lower is better
  MotTally tally;
};

/// CLEAR-MOT with persistent correspondences. Throws ConfigError when the
/// sequences cover different frame counts or an id repeats within a frame.
MotResult clear_mot(const MotFrames& gt, const MotFrames& hyp, double iou_min);
MotResult mot_from_tally(const MotTally& tally);

MotFrames gt_mot_frames(const GroundTruth& truth);
MotFrames tracks_to_mot_frames(const std::vector<Track>& tracks, std::size_t num_frames);

}  // namespace saccade
