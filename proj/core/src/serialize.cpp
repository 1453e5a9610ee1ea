// SPDX-License-Identifier: Apache-2.0
#include "saccade/serialize.hpp"

#include "json_convert.hpp"
#include "saccade/error.hpp"

namespace saccade {

std::string mask_to_json(const PatchMask& mask) { return nlohmann::json(mask.indices()).dump(); }

PatchMask mask_from_json(const std::string& text, std::size_t num_patches) {
  try {
    return PatchMask::from_indices(num_patches, nlohmann::json::parse(text).get<std::vector<std::size_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed mask JSON: ") + e.what());
  }
}

std::string bandwidth_to_json(const BandwidthReport& report) { return nlohmann::json(report).dump(); }

BandwidthReport bandwidth_from_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<BandwidthReport>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed bandwidth JSON: ") + e.what());
  }
}

}  // namespace saccade
