// SPDX-License-Identifier: Apache-2.0
#include "saccade/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "saccade/error.hpp"
#include "saccade/pnm.hpp"
#include "saccade/rng.hpp"

namespace saccade {

namespace {

constexpr double kBackground = 0.3;
constexpr int kPlacementAttempts = 500;

struct MovingObject {
  int id;
  int cls;
  double cx, cy, vx, vy, radius;
  double color[3];
};

bool inside_shape(int cls, double dx, double dy, double r) {
  switch (cls) {
    case 0:  // disc
      return dx * dx + dy * dy <= r * r;
    case 1:  // square
      return std::abs(dx) <= 0.8 * r && std::abs(dy) <= 0.8 * r;
    case 2: {  // triangle, apex up
      if (dy < -r || dy > 0.8 * r) return false;
      return std::abs(dx) <= (dy + r) / 1.8;
    }
    case 3:  // cross
      return (std::abs(dx) <= r / 3.0 && std::abs(dy) <= r) || (std::abs(dy) <= r / 3.0 && std::abs(dx) <= r);
  }
  return false;
}

void bounce(double& c, double& v, double r, double extent) {
  if (c < r) {
    c = 2.0 * r - c;
    v = -v;
  } else if (c > extent - r) {
    c = 2.0 * (extent - r) - c;
    v = -v;
  }
}

}  // namespace

const char* shape_class_name(int cls) {
  static const char* names[] = {"disc", "square", "triangle", "cross"};
  return cls >= 0 && cls < kNumShapeClasses ? names[cls] : "unknown";
}

void SceneConfig::validate() const {
  if (width <= 0 || height <= 0) throw ConfigError("scene: frame dimensions must be positive");
  if (channels != 1 && channels != 3) throw ConfigError("scene: channels must be 1 or 3");
  if (patch_size <= 0 || width % patch_size != 0 || height % patch_size != 0) {
    throw ConfigError("scene: patch_size must divide the frame dimensions");
  }
  if (min_objects < 1 || max_objects < min_objects) throw ConfigError("scene: bad object count range");
  if (max_objects > 254) throw ConfigError("scene: at most 254 objects");
  if (!(radius_min > 0.0) || radius_max < radius_min) throw ConfigError("scene: bad radius range");
  if (speed_min < 0.0 || speed_max < speed_min) throw ConfigError("scene: bad speed range");
  if (shift_interval < 2) throw ConfigError("scene: shift_interval must be at least 2");
  if (!(clutter >= 0.0 && clutter <= 1.0)) throw ConfigError("scene: clutter must lie in [0, 1]");
  if (num_frames < 1) throw ConfigError("scene: need at least one frame");
  if (2.0 * radius_max >= std::min(width, height)) throw ConfigError("scene: objects larger than the frame");
  // Discs of radius r_max plus a one-pixel margin must fit in half the frame.
  const double need = max_objects * std::numbers::pi * (radius_max + 1.0) * (radius_max + 1.0);
  if (need > 0.5 * width * height) {
    throw ConfigError("scene: " + std::to_string(max_objects) + " objects do not fit a " +
                      std::to_string(width) + "x" + std::to_string(height) + " frame");
  }
}

PixelMap GroundTruth::attention(std::size_t t) const {
  const FrameTruth& f = frames.at(t);
  PixelMap m(width, height);
  for (std::size_t i = 0; i < f.instance.size(); ++i) m.values[i] = f.instance[i] == f.attended_id ? 1.0 : 0.0;
  return m;
}

PixelMap GroundTruth::foreground(std::size_t t) const {
  const FrameTruth& f = frames.at(t);
  PixelMap m(width, height);
  for (std::size_t i = 0; i < f.instance.size(); ++i) m.values[i] = f.instance[i] >= 0 ? 1.0 : 0.0;
  return m;
}

Video generate_video(const SceneConfig& config, std::string name) {
  config.validate();
  Rng rng(config.seed);
  const int n_objects =
      config.min_objects + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_objects - config.min_objects + 1)));

  std::vector<MovingObject> objects;
  for (int id = 0; id < n_objects; ++id) {
    MovingObject o{};
    o.id = id;
    o.cls = static_cast<int>(rng.below(kNumShapeClasses));
    o.radius = rng.uniform(config.radius_min, config.radius_max);
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      o.cx = rng.uniform(o.radius, config.width - o.radius);
      o.cy = rng.uniform(o.radius, config.height - o.radius);
      placed = std::all_of(objects.begin(), objects.end(), [&](const MovingObject& other) {
        return std::hypot(o.cx - other.cx, o.cy - other.cy) > o.radius + other.radius + 1.0;
      });
    }
    if (!placed) throw ConfigError("scene: could not place " + std::to_string(n_objects) + " non-overlapping objects");
    const double speed = rng.uniform(config.speed_min, config.speed_max);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    o.vx = speed * std::cos(angle);
    o.vy = speed * std::sin(angle);
    for (double& c : o.color) c = rng.uniform(0.75, 1.0);
    objects.push_back(o);
  }

  Video video;
  video.name = std::move(name);
  video.scene = config;
  GroundTruth truth;
  truth.width = config.width;
  truth.height = config.height;

  int attended = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_objects)));
  const std::size_t n_pixels = static_cast<std::size_t>(config.width) * config.height;

  for (int t = 0; t < config.num_frames; ++t) {
    if (t > 0) {
      for (MovingObject& o : objects) {
        o.cx += o.vx;
        o.cy += o.vy;
        bounce(o.cx, o.vx, o.radius, config.width);
        bounce(o.cy, o.vy, o.radius, config.height);
      }
      if (t % config.shift_interval == 0 && n_objects > 1) {
        // Uniform over the other objects.
        int next = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_objects - 1)));
        if (next >= attended) ++next;
        attended = next;
      }
    }

    Frame frame(config.width, config.height, config.channels, 0.0, t);
    for (double& v : frame.data) {
      v = quantize_unit(kBackground + config.clutter * rng.uniform(-0.3, 0.3));
    }
    FrameTruth ft;
    ft.instance.assign(n_pixels, -1);
    for (const MovingObject& o : objects) {
      const int y0 = std::max(0, static_cast<int>(std::floor(o.cy - o.radius)));
      const int y1 = std::min(config.height - 1, static_cast<int>(std::ceil(o.cy + o.radius)));
      const int x0 = std::max(0, static_cast<int>(std::floor(o.cx - o.radius)));
      const int x1 = std::min(config.width - 1, static_cast<int>(std::ceil(o.cx + o.radius)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          if (!inside_shape(o.cls, x + 0.5 - o.cx, y + 0.5 - o.cy, o.radius)) continue;
          ft.instance[static_cast<std::size_t>(y) * config.width + x] = o.id;
          for (int c = 0; c < config.channels; ++c) {
            const double shade = config.channels == 1 ? o.color[0] : o.color[c];
            frame.at(y, x, c) = quantize_unit(shade);
          }
        }
      }
    }
    for (const MovingObject& o : objects) {
      int min_x = config.width, min_y = config.height, max_x = -1, max_y = -1;
      for (int y = 0; y < config.height; ++y)
        for (int x = 0; x < config.width; ++x)
          if (ft.instance[static_cast<std::size_t>(y) * config.width + x] == o.id) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
          }
      if (max_x < 0) continue;  // fully occluded this frame
      ft.objects.push_back({o.id, o.cls,
                            Box{double(min_x), double(min_y), double(max_x - min_x + 1), double(max_y - min_y + 1)}});
    }
    ft.attended_id = attended;
    ft.label = objects[static_cast<std::size_t>(attended)].cls;
    video.frames.push_back(std::move(frame));
    truth.frames.push_back(std::move(ft));
  }
  video.truth = std::move(truth);
  return video;
}

std::vector<Video> generate_videos(const SceneConfig& config, std::size_t count, const std::string& prefix) {
  std::vector<Video> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SceneConfig c = config;
    c.seed = Rng::mix(config.seed, i);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu", prefix.c_str(), i);
    out.push_back(generate_video(c, name));
  }
  return out;
}

}  // namespace saccade
