// SPDX-License-Identifier: Apache-2.0
#include "saccade/sensor.hpp"

#include <cmath>
#include <string>

#include "saccade/error.hpp"

namespace saccade {

Frame::Frame(int w, int h, int c, double fill, int t)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(w) * h * c, fill), time_index(t) {}

void Frame::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("frame dimensions must be positive");
  if (channels != 1 && channels != 3) throw ConfigError("frame must have 1 or 3 channels");
  if (data.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("frame data length does not match width*height*channels");
  }
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("frame value outside [0, 1]");
  }
  if (time_index < 0) throw ConfigError("frame time index must be non-negative");
}

PixelMap::PixelMap(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

PatchGrid::PatchGrid(int width, int height, int patch_size)
    : patch_size_(patch_size), width_(width), height_(height) {
  if (patch_size <= 0 || width <= 0 || height <= 0) {
    throw ConfigError("patch grid needs positive frame and patch sizes");
  }
  if (width % patch_size != 0 || height % patch_size != 0) {
    throw ConfigError("patch size " + std::to_string(patch_size) + " does not divide frame " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  rows_ = height / patch_size;
  cols_ = width / patch_size;
}

PatchRect PatchGrid::rect(std::size_t index) const {
  if (index >= num_patches()) throw DimensionError("patch index out of range");
  const int r = static_cast<int>(index / cols_);
  const int c = static_cast<int>(index % cols_);
  return {r * patch_size_, c * patch_size_, patch_size_};
}

std::size_t PatchGrid::index_of(int pixel_row, int pixel_col) const {
  return static_cast<std::size_t>(pixel_row / patch_size_) * cols_ + pixel_col / patch_size_;
}

PatchGrid partition(const Frame& frame, int patch_size) {
  return PatchGrid(frame.width, frame.height, patch_size);
}

PatchMask::PatchMask(std::size_t num_patches, bool sensed) : sensed_(num_patches, sensed ? 1 : 0) {}

PatchMask PatchMask::from_indices(std::size_t num_patches, const std::vector<std::size_t>& indices) {
  PatchMask mask(num_patches);
  for (std::size_t i : indices) {
    if (i >= num_patches) throw DimensionError("mask index out of range");
    mask.set(i);
  }
  return mask;
}

std::size_t PatchMask::count() const {
  std::size_t n = 0;
  for (auto s : sensed_) n += s;
  return n;
}

std::vector<std::size_t> PatchMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sensed_.size(); ++i)
    if (sensed_[i]) out.push_back(i);
  return out;
}

namespace {

void check_inputs(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) {
  if (!grid.matches(frame)) throw DimensionError("patch grid was built for a different frame size");
  if (mask.size() != grid.num_patches()) throw DimensionError("mask size does not match grid");
}

}  // namespace

std::vector<Token> extract_tokens(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) {
  check_inputs(frame, grid, mask);
  const int p = grid.patch_size();
  const int ch = frame.channels;
  std::vector<Token> tokens;
  tokens.reserve(mask.count());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask.sensed(i)) continue;
    const PatchRect r = grid.rect(i);
    Token tok{i, {}};
    tok.pixels.reserve(static_cast<std::size_t>(p) * p * ch);
    for (int y = 0; y < p; ++y)
      for (int x = 0; x < p; ++x)
        for (int c = 0; c < ch; ++c) tok.pixels.push_back(frame.at(r.row0 + y, r.col0 + x, c));
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

Frame zero_fill(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) {
  check_inputs(frame, grid, mask);
  Frame out(frame.width, frame.height, frame.channels, 0.0, frame.time_index);
  const int p = grid.patch_size();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask.sensed(i)) continue;
    const PatchRect r = grid.rect(i);
    for (int y = 0; y < p; ++y)
      for (int x = 0; x < p; ++x)
        for (int c = 0; c < frame.channels; ++c)
          out.at(r.row0 + y, r.col0 + x, c) = frame.at(r.row0 + y, r.col0 + x, c);
  }
  return out;
}

BandwidthReport& BandwidthReport::operator+=(const BandwidthReport& other) {
  patches_sensed += other.patches_sensed;
  patches_total += other.patches_total;
  pixels_read += other.pixels_read;
  pixels_total += other.pixels_total;
  adc_conversions += other.adc_conversions;
  energy += other.energy;
  fraction_sensed = patches_total ? static_cast<double>(patches_sensed) / static_cast<double>(patches_total) : 0.0;
  return *this;
}

BandwidthReport readout_cost(const PatchMask& mask, const PatchGrid& grid, int channels,
                             const ReadoutCostModel& cost) {
  if (mask.size() != grid.num_patches()) throw DimensionError("mask size does not match grid");
  if (cost.energy_per_read < 0.0 || cost.energy_per_conversion < 0.0) {
    throw ConfigError("readout energies must be non-negative");
  }
  const std::uint64_t per_patch = static_cast<std::uint64_t>(grid.patch_size()) * grid.patch_size() * channels;
  BandwidthReport r;
  r.patches_sensed = mask.count();
  r.patches_total = grid.num_patches();
  r.pixels_read = r.patches_sensed * per_patch;
  r.pixels_total = r.patches_total * per_patch;
  r.adc_conversions = r.pixels_read;
  r.fraction_sensed = static_cast<double>(r.patches_sensed) / static_cast<double>(r.patches_total);
  r.energy = static_cast<double>(r.pixels_read) * cost.energy_per_read +
             static_cast<double>(r.adc_conversions) * cost.energy_per_conversion;
  return r;
}

}  // namespace saccade
