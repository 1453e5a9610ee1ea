// SPDX-License-Identifier: Apache-2.0
//
// Patch-addressable sensor model. A frame is split into a raster grid of
// P×P patches; a PatchMask says which patches are read out. Unsensed
// patches are never touched: they are neither read from the pixel array
// nor converted by the ADC, which is what readout_cost accounts for.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace saccade {

/// Interleaved (row, col, channel) pixel values in [0, 1].
struct Frame {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;
  int time_index = 0;

  Frame() = default;
  Frame(int w, int h, int c, double fill = 0.0, int t = 0);

  double& at(int row, int col, int ch = 0) {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  double at(int row, int col, int ch = 0) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }

  /// Throws DimensionError / ConfigError if invariants do not hold.
  void validate() const;
};

/// Single-channel per-pixel map (saliency, attention, foreground).
struct PixelMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  PixelMap() = default;
  PixelMap(int w, int h, double fill = 0.0);

  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

struct PatchRect {
  int row0, col0;  // top-left pixel
  int size;
};

class PatchGrid {
 public:
  PatchGrid() = default;
  /// Throws ConfigError unless patch_size divides both dimensions.
  PatchGrid(int width, int height, int patch_size);

  int patch_size() const { return patch_size_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t num_patches() const { return static_cast<std::size_t>(rows_) * cols_; }

  PatchRect rect(std::size_t index) const;
  std::size_t index_of(int pixel_row, int pixel_col) const;

  bool matches(const Frame& frame) const { return frame.width == width_ && frame.height == height_; }
  bool matches(const PixelMap& map) const { return map.width == width_ && map.height == height_; }

  friend bool operator==(const PatchGrid&, const PatchGrid&) = default;

 private:
  int patch_size_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  int width_ = 0;
  int height_ = 0;
};

PatchGrid partition(const Frame& frame, int patch_size);

class PatchMask {
 public:
  PatchMask() = default;
  explicit PatchMask(std::size_t num_patches, bool sensed = false);
  static PatchMask all(std::size_t num_patches) { return PatchMask(num_patches, true); }
  static PatchMask from_indices(std::size_t num_patches, const std::vector<std::size_t>& indices);

  std::size_t size() const { return sensed_.size(); }
  bool sensed(std::size_t i) const { return sensed_.at(i) != 0; }
  void set(std::size_t i, bool value = true) { sensed_.at(i) = value ? 1 : 0; }
  std::size_t count() const;
  /// Sensed indices in ascending order.
  std::vector<std::size_t> indices() const;

  friend bool operator==(const PatchMask&, const PatchMask&) = default;

 private:
  std::vector<std::uint8_t> sensed_;
};

struct Token {
  std::size_t index = 0;
  /// P·P·channels values, row-major within the patch, channels interleaved.
  std::vector<double> pixels;
};

/// Sensed patches only, in ascending index order.
std::vector<Token> extract_tokens(const Frame& frame, const PatchGrid& grid, const PatchMask& mask);

/// Copy of the frame with every unsensed patch set to zero.
Frame zero_fill(const Frame& frame, const PatchGrid& grid, const PatchMask& mask);

struct ReadoutCostModel {
  double energy_per_read = 1.0;
  double energy_per_conversion = 1.0;
};

struct BandwidthReport {
  std::uint64_t patches_sensed = 0;
  std::uint64_t patches_total = 0;
  std::uint64_t pixels_read = 0;
  std::uint64_t pixels_total = 0;
  std::uint64_t adc_conversions = 0;
  double fraction_sensed = 0.0;
  double energy = 0.0;

  BandwidthReport& operator+=(const BandwidthReport& other);
};

BandwidthReport readout_cost(const PatchMask& mask, const PatchGrid& grid, int channels,
                             const ReadoutCostModel& cost = {});

}  // namespace saccade
