// SPDX-License-Identifier: Apache-2.0
#include "saccade/tracking.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <tuple>

#include "init_util.hpp"
#include "saccade/error.hpp"
#include "saccade/ops.hpp"
#include "saccade/report.hpp"

namespace saccade {

double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

ParamStore init_objectness_params(int patch_size, int channels, std::uint64_t seed) {
  Rng rng(seed);
  ParamStore store;
  const std::size_t dim = static_cast<std::size_t>(patch_size) * patch_size * channels;
  detail::add_linear(store, rng, "objectness", dim, 1);
  return store;
}

Tensor objectness_logits(std::span<const Token> tokens, const ParamStore& params) {
  if (tokens.empty()) throw DimensionError("objectness: no tokens");
  const std::size_t dim = params.get("objectness/w").dim(0);
  std::vector<double> flat;
  flat.reserve(tokens.size() * dim);
  for (const Token& t : tokens) {
    if (t.pixels.size() != dim) throw DimensionError("objectness: token length mismatch");
    flat.insert(flat.end(), t.pixels.begin(), t.pixels.end());
  }
  return detail::linear(params, "objectness", Tensor::from({tokens.size(), dim}, std::move(flat)));
}

std::vector<double> box_patch_labels(std::span<const Box> boxes, const PatchGrid& grid, double min_cover) {
  std::vector<double> labels(grid.num_patches(), 0.0);
  const double area = static_cast<double>(grid.patch_size()) * grid.patch_size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const PatchRect r = grid.rect(i);
    const Box patch{double(r.col0), double(r.row0), double(r.size), double(r.size)};
    for (const Box& b : boxes) {
      const double ix = std::max(0.0, std::min(patch.x + patch.w, b.x + b.w) - std::max(patch.x, b.x));
      const double iy = std::max(0.0, std::min(patch.y + patch.h, b.y + b.h) - std::max(patch.y, b.y));
      if (ix * iy / area >= min_cover) {
        labels[i] = 1.0;
        break;
      }
    }
  }
  return labels;
}

double train_objectness(std::span<const Video> videos, const PatchGrid& grid, ParamStore& params,
                        const ObjectnessTrainConfig& config) {
  struct Sample {
    const Frame* frame;
    std::vector<double> labels;
  };
  std::vector<Sample> samples;
  for (const Video& v : videos) {
    if (!v.truth) throw ConfigError("objectness training needs ground truth boxes");
    for (std::size_t t = 0; t < v.frames.size(); ++t) {
      std::vector<Box> boxes;
      for (const ObjectTruth& o : v.truth->frames[t].objects) boxes.push_back(o.box);
      samples.push_back({&v.frames[t], box_patch_labels(boxes, grid)});
    }
  }
  if (samples.empty()) throw ConfigError("objectness training set is empty");

  Rng rng(config.seed);
  const PatchMask all = PatchMask::all(grid.num_patches());
  double last = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span(order));
    double total = 0.0;
    for (std::size_t idx : order) {
      const Sample& s = samples[idx];
      params.zero_grads();
      const auto tokens = extract_tokens(*s.frame, grid, all);
      const Tensor target = Tensor::from({s.labels.size(), 1}, s.labels);
      const Tensor loss = ops::bce(ops::sigmoid(objectness_logits(tokens, params)), target);
      loss.backward();
      params.adam_step(config.adam);
      total += loss.item();
    }
    last = total / static_cast<double>(samples.size());
  }
  return last;
}

std::vector<Detection> detect_on_mask(const Frame& frame, const PatchGrid& grid, const PatchMask& mask,
                                      const ParamStore& params, double threshold) {
  const auto tokens = extract_tokens(frame, grid, mask);
  if (tokens.empty()) return {};
  std::vector<double> score(grid.num_patches(), -1.0);
  {
    NoGradGuard no_grad;
    const Tensor p = ops::sigmoid(objectness_logits(tokens, params));
    for (std::size_t i = 0; i < tokens.size(); ++i) score[tokens[i].index] = p.at(i);
  }
  auto positive = [&](std::size_t i) { return score[i] >= threshold; };

  std::vector<Detection> out;
  std::vector<bool> visited(grid.num_patches(), false);
  const int rows = grid.rows(), cols = grid.cols();
  for (std::size_t start = 0; start < grid.num_patches(); ++start) {
    if (visited[start] || !positive(start)) continue;
    // Flood fill over 4-connected positive patches.
    std::vector<std::size_t> stack{start};
    visited[start] = true;
    int min_r = rows, max_r = -1, min_c = cols, max_c = -1;
    double sum = 0.0;
    std::size_t count = 0;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int r = static_cast<int>(i) / cols, c = static_cast<int>(i) % cols;
      min_r = std::min(min_r, r);
      max_r = std::max(max_r, r);
      min_c = std::min(min_c, c);
      max_c = std::max(max_c, c);
      sum += score[i];
      ++count;
      const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int nr = r + dr[k], nc = c + dc[k];
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
        const std::size_t j = static_cast<std::size_t>(nr) * cols + nc;
        if (!visited[j] && positive(j)) {
          visited[j] = true;
          stack.push_back(j);
        }
      }
    }
    const double p = grid.patch_size();
    out.push_back({Box{min_c * p, min_r * p, (max_c - min_c + 1) * p, (max_r - min_r + 1) * p},
                   sum / static_cast<double>(count), frame.time_index});
  }
  return out;
}

void associate(std::vector<Track>& tracks, std::span<const Detection> detections, const TrackerConfig& config,
               int& next_id) {
  if (detections.empty() && tracks.empty()) return;
  int frame = -1;
  for (const Detection& d : detections) {
    if (frame >= 0 && d.frame != frame) throw ConfigError("associate: detections from different frames");
    frame = d.frame;
  }

  struct Pair {
    double iou;
    std::size_t track, det;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!tracks[t].active) continue;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double v = iou(tracks[t].last_box(), detections[d].box);
      if (v >= config.iou_min) pairs.push_back({v, t, d});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (tracks[a.track].id != tracks[b.track].id) return tracks[a.track].id < tracks[b.track].id;
    return a.det < b.det;
  });

  std::vector<bool> track_used(tracks.size(), false), det_used(detections.size(), false);
  for (const Pair& p : pairs) {
    if (track_used[p.track] || det_used[p.det]) continue;
    track_used[p.track] = det_used[p.det] = true;
    Track& tr = tracks[p.track];
    tr.history.emplace_back(detections[p.det].frame, detections[p.det].box);
    tr.confidences.push_back(detections[p.det].confidence);
    tr.misses = 0;
  }
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    if (!tracks[t].active || track_used[t]) continue;
    if (++tracks[t].misses >= config.max_misses) tracks[t].active = false;
  }
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (det_used[d]) continue;
    Track tr;
    tr.id = next_id++;
    tr.history.emplace_back(detections[d].frame, detections[d].box);
    tr.confidences.push_back(detections[d].confidence);
    tracks.push_back(std::move(tr));
  }
}

void GreedyTracker::associate(std::span<const Detection> detections) {
  saccade::associate(tracks_, detections, config_, next_id_);
}

std::string tracks_to_csv(const std::vector<Track>& tracks) {
  std::vector<std::tuple<int, int, Box, double>> rows;
  for (const Track& t : tracks)
    for (std::size_t i = 0; i < t.history.size(); ++i)
      rows.emplace_back(t.history[i].first, t.id, t.history[i].second, t.confidences.at(i));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::string out = "frame,id,x,y,w,h,confidence\n";
  for (const auto& [frame, id, box, conf] : rows) {
    out += std::to_string(frame) + "," + std::to_string(id) + "," + format_double(box.x) + "," +
           format_double(box.y) + "," + format_double(box.w) + "," + format_double(box.h) + "," +
           format_double(conf) + "\n";
  }
  return out;
}

void write_tracks_csv(const std::filesystem::path& file, const std::vector<Track>& tracks) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << tracks_to_csv(tracks);
}

}  // namespace saccade
