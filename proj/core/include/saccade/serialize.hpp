// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "saccade/sensor.hpp"

namespace saccade {

/// JSON array of sensed patch indices, e.g. "[0,3,7]".
std::string mask_to_json(const PatchMask& mask);
PatchMask mask_from_json(const std::string& text, std::size_t num_patches);

std::string bandwidth_to_json(const BandwidthReport& report);
BandwidthReport bandwidth_from_json(const std::string& text);

}  // namespace saccade
