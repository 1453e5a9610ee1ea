// SPDX-License-Identifier: Apache-2.0
#include "saccade/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_convert.hpp"
#include "saccade/error.hpp"
#include "saccade/pnm.hpp"

namespace saccade {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

std::string numbered(const char* stem, std::size_t index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.%s", stem, index, ext);
  return buf;
}

nlohmann::json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("missing file: " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("failed to parse " + file.string() + ": " + e.what());
  }
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << text << '\n';
  if (!out) throw IoError("failed writing " + file.string());
}

PixelMap instance_to_map(const FrameTruth& ft, int width, int height) {
  PixelMap m(width, height);
  for (std::size_t i = 0; i < ft.instance.size(); ++i) m.values[i] = (ft.instance[i] + 1) / 255.0;
  return m;
}

}  // namespace

void write_video(const fs::path& dir, const Video& video) {
  fs::create_directories(dir / "attention");
  if (video.truth) fs::create_directories(dir / "instances");
  for (std::size_t t = 0; t < video.frames.size(); ++t) {
    write_pnm(dir / numbered("frame", t, "ppm"), video.frames[t]);
  }

  nlohmann::json gt;
  gt["format_version"] = kFormatVersion;
  gt["video"] = video.name;
  gt["scene"] = video.scene;
  gt["num_frames"] = video.frames.size();
  gt["has_truth"] = video.truth.has_value();
  nlohmann::json frames = nlohmann::json::array();
  if (video.truth) {
    const GroundTruth& truth = *video.truth;
    for (std::size_t t = 0; t < truth.frames.size(); ++t) {
      const FrameTruth& ft = truth.frames[t];
      nlohmann::json objs = nlohmann::json::array();
      for (const ObjectTruth& o : ft.objects) objs.push_back({{"id", o.id}, {"class", o.cls}, {"box", o.box}});
      frames.push_back({{"index", t}, {"label", ft.label}, {"attended_id", ft.attended_id}, {"objects", objs}});
      write_pgm(dir / "attention" / numbered("mask", t, "pgm"), truth.attention(t));
      write_pgm(dir / "instances" / numbered("inst", t, "pgm"), instance_to_map(ft, truth.width, truth.height));
    }
  }
  gt["frames"] = std::move(frames);
  write_text(dir / "gt.json", gt.dump(2));
}

Video read_video(const fs::path& dir) {
  const fs::path gt_file = dir / "gt.json";
  const nlohmann::json gt = read_json(gt_file);
  Video video;
  try {
    if (gt.at("format_version").get<int>() != kFormatVersion) {
      throw IoError("unsupported dataset format version in " + gt_file.string());
    }
    video.name = gt.at("video").get<std::string>();
    video.scene = gt.at("scene").get<SceneConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed " + gt_file.string() + ": " + e.what());
  }
  const std::size_t n = gt.at("num_frames").get<std::size_t>();
  for (std::size_t t = 0; t < n; ++t) {
    const fs::path f = dir / numbered("frame", t, "ppm");
    if (!fs::exists(f)) throw IoError("missing frame " + std::to_string(t) + ": " + f.string());
    Frame frame = read_pnm(f);
    frame.time_index = static_cast<int>(t);
    video.frames.push_back(std::move(frame));
  }
  if (!gt.value("has_truth", false)) return video;

  GroundTruth truth;
  truth.width = video.scene.width;
  truth.height = video.scene.height;
  const auto& frames = gt.at("frames");
  if (frames.size() != n) throw IoError("gt.json frame count mismatch in " + gt_file.string());
  for (std::size_t t = 0; t < n; ++t) {
    FrameTruth ft;
    try {
      const auto& jf = frames.at(t);
      ft.label = jf.at("label").get<int>();
      ft.attended_id = jf.at("attended_id").get<int>();
      for (const auto& jo : jf.at("objects")) {
        ft.objects.push_back({jo.at("id").get<int>(), jo.at("class").get<int>(), jo.at("box").get<Box>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed frame " + std::to_string(t) + " in " + gt_file.string() + ": " + e.what());
    }
    const fs::path mask_file = dir / "attention" / numbered("mask", t, "pgm");
    if (!fs::exists(mask_file)) {
      throw IoError("missing attention mask for frame " + std::to_string(t) + ": " + mask_file.string());
    }
    const fs::path inst_file = dir / "instances" / numbered("inst", t, "pgm");
    if (!fs::exists(inst_file)) {
      throw IoError("missing instance map for frame " + std::to_string(t) + ": " + inst_file.string());
    }
    const PixelMap mask = read_pgm(mask_file);
    const PixelMap inst = read_pgm(inst_file);
    const Frame& frame = video.frames[t];
    if (mask.width != frame.width || mask.height != frame.height || inst.width != frame.width ||
        inst.height != frame.height) {
      throw IoError("frame " + std::to_string(t) + " and its masks differ in size in " + dir.string());
    }
    ft.instance.resize(inst.values.size());
    for (std::size_t i = 0; i < inst.values.size(); ++i) {
      ft.instance[i] = static_cast<int>(std::lround(inst.values[i] * 255.0)) - 1;
    }
    for (std::size_t i = 0; i < mask.values.size(); ++i) {
      if ((mask.values[i] > 0.5) != (ft.instance[i] == ft.attended_id)) {
        throw IoError("attention mask of frame " + std::to_string(t) + " disagrees with instance map in " +
                      dir.string());
      }
    }
    truth.frames.push_back(std::move(ft));
  }
  video.truth = std::move(truth);
  return video;
}

std::vector<fs::path> dataset_files(const std::vector<Video>& videos) {
  std::vector<fs::path> files{"dataset.json"};
  for (const Video& v : videos) {
    for (std::size_t t = 0; t < v.frames.size(); ++t) files.push_back(fs::path(v.name) / numbered("frame", t, "ppm"));
    files.push_back(fs::path(v.name) / "gt.json");
    if (v.truth) {
      for (std::size_t t = 0; t < v.frames.size(); ++t) {
        files.push_back(fs::path(v.name) / "attention" / numbered("mask", t, "pgm"));
        files.push_back(fs::path(v.name) / "instances" / numbered("inst", t, "pgm"));
      }
    }
  }
  return files;
}

void write_dataset(const fs::path& root, const std::vector<Video>& videos) {
  fs::create_directories(root);
  nlohmann::json index;
  index["format_version"] = kFormatVersion;
  index["videos"] = nlohmann::json::array();
  for (const Video& v : videos) {
    if (v.name.empty() || v.name.find('/') != std::string::npos) throw IoError("invalid video name '" + v.name + "'");
    index["videos"].push_back(v.name);
    write_video(root / v.name, v);
  }
  write_text(root / "dataset.json", index.dump(2));
}

std::vector<Video> read_dataset(const fs::path& root) {
  const fs::path index_file = root / "dataset.json";
  const nlohmann::json index = read_json(index_file);
  std::vector<Video> videos;
  try {
    for (const auto& name : index.at("videos")) videos.push_back(read_video(root / name.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed " + index_file.string() + ": " + e.what());
  }
  return videos;
}

}  // namespace saccade
