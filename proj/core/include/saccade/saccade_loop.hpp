// SPDX-License-Identifier: Apache-2.0
//
// Training schema and test-time protocol for the learned saccade policy.
//
// Training, per window of `period` frames starting at t = 0, period, ...:
//   h <- h0; consume frame t fully sensed;
//   for j = 1..horizon: heatmap_j = σ(head(h)); loss += BCE(heatmap_j, labels(t+j));
//                       mask_j = top-k(heatmap_j); consume frame t+j through mask_j.
// The summed window loss is back-propagated through the whole unroll,
// h0 included, and one optimizer step is taken per window.
//
// Test: h <- h0 once per video, frame 0 fully sensed, every later frame
// sensed through the top-k of the heatmap predicted from the state so far.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saccade/datagen.hpp"
#include "saccade/gru.hpp"
#include "saccade/param_store.hpp"
#include "saccade/rng.hpp"
#include "saccade/selection.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

/// Which ground-truth map supervises the heatmap: the attended object
/// (saliency) or all objects (foreground proxy, used for tracking).
enum class TargetMap { attention, foreground };

TargetMap parse_target_map(const std::string& name);

struct EpisodeConfig {
  int period = 4;
  int horizon = 3;
  Budget budget = Budget::fraction(0.3);
  double tau_gt = 0.1;
  TargetMap target = TargetMap::attention;

  void validate(std::size_t num_patches) const;
};

/// label_i = 1 iff the salient-pixel fraction of patch i is >= tau.
std::vector<double> patch_labels(const PixelMap& attention, const PatchGrid& grid, double tau);

std::vector<double> target_labels(const Video& video, std::size_t t, const PatchGrid& grid,
                                  const EpisodeConfig& config);

struct SaccadeEpochStats {
  double mean_window_loss = 0.0;
  std::size_t windows = 0;
  std::size_t skipped_videos = 0;  // shorter than one period
};

/// One pass over the (shuffled) videos. Videos must carry ground truth.
SaccadeEpochStats train_saccade_epoch(std::span<const Video> videos, ParamStore& params, const GRUConfig& gru,
                                      const PatchGrid& grid, const EpisodeConfig& episode, const AdamConfig& adam,
                                      Rng& rng);

/// Loss of one window without updating anything (evaluation only).
double window_loss(const Video& video, std::size_t start, const ParamStore& params, const GRUConfig& gru,
                   const PatchGrid& grid, const EpisodeConfig& episode);

struct TraceEntry {
  std::size_t frame = 0;
  PatchMask mask;
  Heatmap heatmap;  // prediction for this frame, made before sensing it
  BandwidthReport bandwidth;
  std::optional<std::vector<double>> labels;
};

struct SaccadeTrace {
  std::string video;
  std::vector<TraceEntry> frames;

  BandwidthReport total_bandwidth() const;
};

/// Consumes no ground truth. Throws ConfigError on an empty video.
SaccadeTrace infer_saccade_video(const Video& video, const ParamStore& params, const GRUConfig& gru,
                                 const PatchGrid& grid, const Budget& budget, const ReadoutCostModel& cost = {});

/// Fills TraceEntry::labels from the video's ground truth.
void attach_labels(SaccadeTrace& trace, const Video& video, const PatchGrid& grid, const EpisodeConfig& episode);

/// Mean per-frame AUROC over frames >= 1 whose labels contain both
/// classes. Returns the number of frames averaged via `frames_used`.
double trace_auroc(const SaccadeTrace& trace, std::size_t* frames_used = nullptr);

/// JSON-lines: one record per frame with frame, mask, heatmap, bandwidth
/// and (when present) labels.
std::string trace_to_jsonl(const SaccadeTrace& trace);
void write_trace(const std::filesystem::path& file, const SaccadeTrace& trace);
SaccadeTrace read_trace(const std::filesystem::path& file);

}  // namespace saccade
