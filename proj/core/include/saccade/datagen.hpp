// SPDX-License-Identifier: Apache-2.0
//
// Deterministic moving-shapes videos with the ground truth a saliency /
// tracking dataset would carry: a per-frame attended object (its class is
// the frame label and its visible silhouette the attention mask), boxes
// with persistent track ids, and a per-pixel instance map.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saccade/box.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

/// disc, square, triangle, cross
inline constexpr int kNumShapeClasses = 4;
const char* shape_class_name(int cls);

struct SceneConfig {
  int width = 32;
  int height = 32;
  int channels = 1;
  int patch_size = 4;
  int min_objects = 1;
  int max_objects = 3;
  double radius_min = 4.0;
  double radius_max = 6.0;
  double speed_min = 0.5;
  double speed_max = 1.5;
  int shift_interval = 8;
  double clutter = 0.2;
  int num_frames = 24;
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct ObjectTruth {
  int id = 0;
  int cls = 0;
  Box box;
  friend bool operator==(const ObjectTruth&, const ObjectTruth&) = default;
};

struct FrameTruth {
  int label = 0;
  int attended_id = 0;
  /// Visible objects only.
  std::vector<ObjectTruth> objects;
  /// Row-major object id per pixel, -1 for background.
  std::vector<int> instance;
  friend bool operator==(const FrameTruth&, const FrameTruth&) = default;
};

struct GroundTruth {
  int width = 0;
  int height = 0;
  std::vector<FrameTruth> frames;

  PixelMap attention(std::size_t t) const;
  /// Union of all instance silhouettes.
  PixelMap foreground(std::size_t t) const;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct Video {
  std::string name;
  SceneConfig scene;
  std::vector<Frame> frames;
  std::optional<GroundTruth> truth;
};

/// Throws ConfigError when the objects cannot be placed without overlap.
Video generate_video(const SceneConfig& config, std::string name = "video");

/// `count` videos whose seeds are derived from config.seed.
std::vector<Video> generate_videos(const SceneConfig& config, std::size_t count,
                                   const std::string& prefix = "video");

}  // namespace saccade
