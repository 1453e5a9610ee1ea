// SPDX-License-Identifier: Apache-2.0
//
// On-disk dataset layout:
//
//   <root>/dataset.json                      {"format_version", "videos": [...]}
//   <root>/<video>/frame_000000.ppm ...      P5 or P6 pixmaps
//   <root>/<video>/gt.json                   scene config, labels, boxes, track ids
//   <root>/<video>/attention/mask_000000.pgm attention silhouettes (0/255)
//   <root>/<video>/instances/inst_000000.pgm object id + 1 per pixel, 0 = background
#pragma once

#include <filesystem>
#include <vector>

#include "saccade/datagen.hpp"

namespace saccade {

void write_video(const std::filesystem::path& dir, const Video& video);
Video read_video(const std::filesystem::path& dir);

void write_dataset(const std::filesystem::path& root, const std::vector<Video>& videos);
std::vector<Video> read_dataset(const std::filesystem::path& root);

/// Files written by write_dataset, relative to `root`, in write order.
std::vector<std::filesystem::path> dataset_files(const std::vector<Video>& videos);

}  // namespace saccade
