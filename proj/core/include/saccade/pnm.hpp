// SPDX-License-Identifier: Apache-2.0
//
// Binary portable pixmaps: P5 (gray) and P6 (RGB), maxval 255 on write.
// Values are quantised as round(v * 255); reading maps byte b to b / 255.0,
// so frames already on the 1/255 lattice round-trip bit-exactly.
#pragma once

#include <filesystem>

#include "saccade/sensor.hpp"

namespace saccade {

void write_pnm(const std::filesystem::path& file, const Frame& frame);
Frame read_pnm(const std::filesystem::path& file);

/// Single-channel map written as P5.
void write_pgm(const std::filesystem::path& file, const PixelMap& map);
PixelMap read_pgm(const std::filesystem::path& file);

/// Nearest value on the 1/255 lattice.
double quantize_unit(double v);

}  // namespace saccade
