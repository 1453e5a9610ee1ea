// SPDX-License-Identifier: Apache-2.0
#include "saccade/saccade_loop.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json_convert.hpp"
#include "saccade/error.hpp"
#include "saccade/metrics.hpp"
#include "saccade/ops.hpp"

namespace saccade {

TargetMap parse_target_map(const std::string& name) {
  if (name == "attention") return TargetMap::attention;
  if (name == "foreground") return TargetMap::foreground;
  throw ConfigError("unknown target map '" + name + "' (expected attention or foreground)");
}

void EpisodeConfig::validate(std::size_t num_patches) const {
  if (period < 2) throw ConfigError("episode: period must be at least 2");
  if (horizon != period - 1) throw ConfigError("episode: horizon must equal period - 1");
  if (!(tau_gt >= 0.0 && tau_gt <= 1.0)) throw ConfigError("episode: tau_gt must lie in [0, 1]");
  budget.resolve(num_patches);
}

std::vector<double> patch_labels(const PixelMap& attention, const PatchGrid& grid, double tau) {
  const std::vector<double> frac = salient_fractions(attention, grid);
  std::vector<double> labels(frac.size());
  for (std::size_t i = 0; i < frac.size(); ++i) labels[i] = frac[i] >= tau ? 1.0 : 0.0;
  return labels;
}

std::vector<double> target_labels(const Video& video, std::size_t t, const PatchGrid& grid,
                                  const EpisodeConfig& config) {
  if (!video.truth) throw ConfigError("video '" + video.name + "' has no ground truth");
  const PixelMap map =
      config.target == TargetMap::attention ? video.truth->attention(t) : video.truth->foreground(t);
  return patch_labels(map, grid, config.tau_gt);
}

namespace {

Tensor features_row(const Frame& frame, const PatchGrid& grid, const PatchMask& mask) {
  return Tensor::row(frame_features(frame, grid, mask));
}

Tensor unroll_window(const Video& video, std::size_t start, const ParamStore& params, const GRUConfig& gru,
                     const PatchGrid& grid, const EpisodeConfig& episode) {
  const PatchMask full = PatchMask::all(grid.num_patches());
  GruStepOutput state = gru_step(features_row(video.frames[start], grid, full), params.get("gru/h0"), params, gru);
  Tensor loss;
  for (int j = 1; j <= episode.horizon; ++j) {
    const std::size_t t = start + static_cast<std::size_t>(j);
    const Tensor pred = ops::sigmoid(state.logits);
    const Tensor target = Tensor::row(target_labels(video, t, grid, episode));
    const Tensor step_loss = ops::bce(pred, target);
    loss = loss.defined() ? ops::add(loss, step_loss) : step_loss;
    if (j == episode.horizon) break;
    const Heatmap heatmap{{pred.data().begin(), pred.data().end()}};
    const PatchMask mask = topk_select(heatmap, episode.budget);
    state = gru_step(features_row(video.frames[t], grid, mask), state.hidden, params, gru);
  }
  return loss;
}

}  // namespace

double window_loss(const Video& video, std::size_t start, const ParamStore& params, const GRUConfig& gru,
                   const PatchGrid& grid, const EpisodeConfig& episode) {
  if (start + static_cast<std::size_t>(episode.period) > video.frames.size()) {
    throw ConfigError("window extends past the end of the video");
  }
  NoGradGuard no_grad;
  return unroll_window(video, start, params, gru, grid, episode).item();
}

SaccadeEpochStats train_saccade_epoch(std::span<const Video> videos, ParamStore& params, const GRUConfig& gru,
                                      const PatchGrid& grid, const EpisodeConfig& episode, const AdamConfig& adam,
                                      Rng& rng) {
  episode.validate(grid.num_patches());
  if (gru.num_patches != grid.num_patches()) throw DimensionError("gru config does not match patch grid");
  std::vector<std::size_t> order(videos.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));

  SaccadeEpochStats stats;
  double total = 0.0;
  const auto period = static_cast<std::size_t>(episode.period);
  for (std::size_t vi : order) {
    const Video& video = videos[vi];
    if (video.frames.size() < period) {
      ++stats.skipped_videos;
      continue;
    }
    for (std::size_t start = 0; start + period <= video.frames.size(); start += period) {
      params.zero_grads();
      const Tensor loss = unroll_window(video, start, params, gru, grid, episode);
      loss.backward();
      params.adam_step(adam);
      total += loss.item();
      ++stats.windows;
    }
  }
  stats.mean_window_loss = stats.windows ? total / static_cast<double>(stats.windows) : 0.0;
  return stats;
}

BandwidthReport SaccadeTrace::total_bandwidth() const {
  BandwidthReport total;
  for (const TraceEntry& e : frames) total += e.bandwidth;
  return total;
}

SaccadeTrace infer_saccade_video(const Video& video, const ParamStore& params, const GRUConfig& gru,
                                 const PatchGrid& grid, const Budget& budget, const ReadoutCostModel& cost) {
  if (video.frames.empty()) throw ConfigError("infer_saccade_video: empty video '" + video.name + "'");
  if (gru.num_patches != grid.num_patches()) throw DimensionError("gru config does not match patch grid");
  NoGradGuard no_grad;
  SaccadeTrace trace;
  trace.video = video.name;
  const int channels = video.frames.front().channels;

  const Tensor& h0 = params.get("gru/h0");
  Tensor logits = gru_head(h0, params);
  Tensor hidden = h0;
  for (std::size_t t = 0; t < video.frames.size(); ++t) {
    TraceEntry entry;
    entry.frame = t;
    const Tensor scores = ops::sigmoid(logits);
    entry.heatmap.scores.assign(scores.data().begin(), scores.data().end());
    entry.mask = t == 0 ? PatchMask::all(grid.num_patches()) : topk_select(entry.heatmap, budget);
    entry.bandwidth = readout_cost(entry.mask, grid, channels, cost);
    GruStepOutput next = gru_step(features_row(video.frames[t], grid, entry.mask), hidden, params, gru);
    hidden = next.hidden;
    logits = next.logits;
    trace.frames.push_back(std::move(entry));
  }
  return trace;
}

void attach_labels(SaccadeTrace& trace, const Video& video, const PatchGrid& grid, const EpisodeConfig& episode) {
  for (TraceEntry& e : trace.frames) e.labels = target_labels(video, e.frame, grid, episode);
}

double trace_auroc(const SaccadeTrace& trace, std::size_t* frames_used) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const TraceEntry& e : trace.frames) {
    if (e.frame == 0 || !e.labels) continue;
    const auto& labels = *e.labels;
    const double pos = std::accumulate(labels.begin(), labels.end(), 0.0);
    if (pos == 0.0 || pos == static_cast<double>(labels.size())) continue;
    sum += auroc(e.heatmap.scores, labels);
    ++used;
  }
  if (frames_used) *frames_used = used;
  return used ? sum / static_cast<double>(used) : 0.0;
}

std::string trace_to_jsonl(const SaccadeTrace& trace) {
  std::string out;
  for (const TraceEntry& e : trace.frames) {
    nlohmann::json j;
    j["video"] = trace.video;
    j["frame"] = e.frame;
    j["mask"] = e.mask.indices();
    j["num_patches"] = e.mask.size();
    j["heatmap"] = e.heatmap.scores;
    j["bandwidth"] = e.bandwidth;
    if (e.labels) j["labels"] = *e.labels;
    out += j.dump() + "\n";
  }
  return out;
}

void write_trace(const std::filesystem::path& file, const SaccadeTrace& trace) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open trace for writing: " + file.string());
  out << trace_to_jsonl(trace);
}

SaccadeTrace read_trace(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("missing trace: " + file.string());
  SaccadeTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TraceEntry e;
      trace.video = j.at("video").get<std::string>();
      e.frame = j.at("frame").get<std::size_t>();
      e.mask = PatchMask::from_indices(j.at("num_patches").get<std::size_t>(),
                                       j.at("mask").get<std::vector<std::size_t>>());
      e.heatmap.scores = j.at("heatmap").get<std::vector<double>>();
      e.bandwidth = j.at("bandwidth").get<BandwidthReport>();
      if (j.contains("labels")) e.labels = j.at("labels").get<std::vector<double>>();
      trace.frames.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw IoError(file.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return trace;
}

}  // namespace saccade
