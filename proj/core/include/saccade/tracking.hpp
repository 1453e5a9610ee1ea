// SPDX-License-Identifier: Apache-2.0
//
// Toy detector over sensed patches plus a greedy IoU tracker. The detector
// scores each sensed patch with a logistic objectness head on its raw
// pixels, merges 4-connected positive patches into one detection, and
// never looks at unsensed patches.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "saccade/box.hpp"
#include "saccade/datagen.hpp"
#include "saccade/param_store.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

struct Detection {
  Box box;
  double confidence = 0.0;
  int frame = 0;
};

struct Track {
  int id = 0;
  std::vector<std::pair<int, Box>> history;  // (frame, box), frames strictly increasing
  std::vector<double> confidences;
  bool active = true;
  int misses = 0;

  const Box& last_box() const { return history.back().second; }
  int last_frame() const { return history.back().first; }
};

double iou(const Box& a, const Box& b);

// --- objectness head -------------------------------------------------------

ParamStore init_objectness_params(int patch_size, int channels, std::uint64_t seed);

/// Logits [T × 1] for the given tokens.
Tensor objectness_logits(std::span<const Token> tokens, const ParamStore& params);

/// 1 for patches at least `min_cover` covered by some box, else 0.
std::vector<double> box_patch_labels(std::span<const Box> boxes, const PatchGrid& grid, double min_cover = 0.3);

struct ObjectnessTrainConfig {
  int epochs = 10;
  AdamConfig adam{0.01, 0.9, 0.999, 1e-8};
  std::uint64_t seed = 0;
};

/// Trains on every patch of every frame (fully sensed), BCE against
/// box_patch_labels. Returns the mean loss of the final epoch.
double train_objectness(std::span<const Video> videos, const PatchGrid& grid, ParamStore& params,
                        const ObjectnessTrainConfig& config);

std::vector<Detection> detect_on_mask(const Frame& frame, const PatchGrid& grid, const PatchMask& mask,
                                      const ParamStore& params, double threshold = 0.5);

// --- association -----------------------------------------------------------

struct TrackerConfig {
  double iou_min = 0.3;
  int max_misses = 3;
};

/// Greedy matcher in descending-IoU order; ids are never reused.
class GreedyTracker {
 public:
  explicit GreedyTracker(TrackerConfig config = {}) : config_(config) {}

  /// All detections must share one frame index (ConfigError otherwise).
  void associate(std::span<const Detection> detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  int next_id() const { return next_id_; }

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
};

/// Functional form: updates `tracks` in place, drawing new ids from
/// `next_id`.
void associate(std::vector<Track>& tracks, std::span<const Detection> detections, const TrackerConfig& config,
               int& next_id);

/// MOT-challenge layout: frame,id,x,y,w,h,confidence (one row per track
/// observation, ordered by frame then id).
void write_tracks_csv(const std::filesystem::path& file, const std::vector<Track>& tracks);
std::string tracks_to_csv(const std::vector<Track>& tracks);

}  // namespace saccade
