// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "saccade/box.hpp"
#include "saccade/datagen.hpp"
#include "saccade/sensor.hpp"

namespace saccade {

inline void to_json(nlohmann::json& j, const Box& b) { j = nlohmann::json::array({b.x, b.y, b.w, b.h}); }
inline void from_json(const nlohmann::json& j, Box& b) {
  b = Box{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>()};
}

inline void to_json(nlohmann::json& j, const SceneConfig& c) {
  j = {{"width", c.width},
       {"height", c.height},
       {"channels", c.channels},
       {"patch_size", c.patch_size},
       {"min_objects", c.min_objects},
       {"max_objects", c.max_objects},
       {"radius_min", c.radius_min},
       {"radius_max", c.radius_max},
       {"speed_min", c.speed_min},
       {"speed_max", c.speed_max},
       {"shift_interval", c.shift_interval},
       {"clutter", c.clutter},
       {"num_frames", c.num_frames},
       {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, SceneConfig& c) {
  j.at("width").get_to(c.width);
  j.at("height").get_to(c.height);
  j.at("channels").get_to(c.channels);
  j.at("patch_size").get_to(c.patch_size);
  j.at("min_objects").get_to(c.min_objects);
  j.at("max_objects").get_to(c.max_objects);
  j.at("radius_min").get_to(c.radius_min);
  j.at("radius_max").get_to(c.radius_max);
  j.at("speed_min").get_to(c.speed_min);
  j.at("speed_max").get_to(c.speed_max);
  j.at("shift_interval").get_to(c.shift_interval);
  j.at("clutter").get_to(c.clutter);
  j.at("num_frames").get_to(c.num_frames);
  j.at("seed").get_to(c.seed);
}

inline void to_json(nlohmann::json& j, const BandwidthReport& r) {
  j = {{"patches_sensed", r.patches_sensed}, {"patches_total", r.patches_total},
       {"pixels_read", r.pixels_read},       {"pixels_total", r.pixels_total},
       {"adc_conversions", r.adc_conversions}, {"fraction_sensed", r.fraction_sensed},
       {"energy", r.energy}};
}

inline void from_json(const nlohmann::json& j, BandwidthReport& r) {
  j.at("patches_sensed").get_to(r.patches_sensed);
  j.at("patches_total").get_to(r.patches_total);
  j.at("pixels_read").get_to(r.pixels_read);
  j.at("pixels_total").get_to(r.pixels_total);
  j.at("adc_conversions").get_to(r.adc_conversions);
  j.at("fraction_sensed").get_to(r.fraction_sensed);
  j.at("energy").get_to(r.energy);
}

}  // namespace saccade
