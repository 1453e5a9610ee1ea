// SPDX-License-Identifier: Apache-2.0
#include "runner.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "saccade/classifier.hpp"
#include "saccade/dataset_io.hpp"
#include "saccade/error.hpp"
#include "saccade/metrics.hpp"
#include "saccade/pnm.hpp"
#include "saccade/report.hpp"
#include "saccade/rng.hpp"
#include "saccade/saccade_loop.hpp"
#include "saccade/serialize.hpp"
#include "saccade/tracking.hpp"
#include "saccade/version.hpp"

namespace fs = std::filesystem;

namespace saccade::cli {

namespace {

constexpr std::array<std::string_view, 7> kSubcommands = {
    "gen-data", "train-classifier", "train-saccade", "eval-classify", "eval-saccade", "eval-track", "mask-demo"};

#define SCENE_KEYS(s)                                                                                      \
  s ".path", s ".videos", s ".seed", s ".width", s ".height", s ".channels", s ".min_objects",            \
      s ".max_objects", s ".radius_min", s ".radius_max", s ".speed_min", s ".speed_max", s ".shift_interval", \
      s ".clutter", s ".num_frames"

constexpr std::string_view kKnownKeys[] = {
    "experiment.id", "experiment.seed", "experiment.output_dir",
    "sensor.patch_size", "sensor.energy_per_read", "sensor.energy_per_conversion",
    SCENE_KEYS("train_data"), SCENE_KEYS("eval_data"),
    "model.kind", "model.dim", "model.heads", "model.blocks", "model.mlp_dim", "model.hidden1", "model.hidden2",
    "model.checkpoint",
    "gru.hidden", "gru.checkpoint",
    "training.epochs", "training.lr", "training.lr_final_fraction", "training.batch_size", "training.policy",
    "training.budget", "training.min_budget", "training.threshold",
    "saccade.period", "saccade.tau_gt", "saccade.target", "saccade.budget",
    "eval.policies", "eval.budgets", "eval.thresholds",
    "tracking.budget", "tracking.iou_min", "tracking.max_misses", "tracking.detector_threshold",
    "tracking.objectness_epochs", "tracking.objectness_lr", "tracking.objectness_checkpoint", "tracking.threshold",
    "demo.policy", "demo.budget", "demo.frames", "demo.threshold",
};

#undef SCENE_KEYS

// Salts that split the experiment seed into independent streams.
enum Salt : std::uint64_t {
  kSaltTrainData = 1,
  kSaltEvalData = 2,
  kSaltModelInit = 3,
  kSaltClassifierShuffle = 4,
  kSaltTrainMasks = 5,
  kSaltEvalMasks = 6,
  kSaltObjectness = 7,
  kSaltTrackMasks = 8,
  kSaltGruInit = 9,
  kSaltSaccadeShuffle = 10,
  kSaltDemoMasks = 11,
};

class Run {
 public:
  Run(std::string_view subcommand, const Config& config, const std::optional<fs::path>& root)
      : cfg(config), subcommand_(subcommand), root_(root) {
    config.check_known(kKnownKeys);
    const auto seed = config.integer_opt("experiment.seed");
    if (!seed) throw ConfigError("config key 'experiment.seed' is required (runs never fall back to a clock seed)");
    if (*seed < 0) config.fail("experiment.seed", "must be non-negative");
    seed_ = static_cast<std::uint64_t>(*seed);
    id_ = config.string("experiment.id", "exp");
    if (id_.empty() || id_.find_first_of("/\\ ") != std::string::npos) {
      config.fail("experiment.id", "must be a non-empty name without spaces or slashes");
    }
    out_ = resolve(config.string("experiment.output_dir", "out"));
    fs::create_directories(out_);
  }

  const Config& cfg;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t salt(std::uint64_t s) const { return Rng::mix(seed_, s); }
  const std::string& id() const { return id_; }
  const fs::path& out() const { return out_; }

  fs::path resolve(const fs::path& p) const {
    if (p.is_absolute() || !root_) return p;
    return *root_ / p;
  }

  /// Path for a new artifact relative to the output directory; parent
  /// directories are created.
  fs::path artifact(const fs::path& rel) { return place(out_ / rel); }

  /// Same for a path that is already fully resolved.
  fs::path place(const fs::path& full) {
    if (full.has_parent_path()) fs::create_directories(full.parent_path());
    record(full);
    return full;
  }

  void record(const fs::path& full) {
    const fs::path rel = full.lexically_relative(out_);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    outputs_.push_back((inside ? rel : full).generic_string());
  }

  void emit(const MetricReport& report, const std::string& metric) {
    MetricReport r = report;
    r.metadata["experiment"] = id_;
    r.metadata["seed"] = std::to_string(seed_);
    for (ReportFormat fmt : {ReportFormat::csv, ReportFormat::json}) {
      emit_report(r, artifact(report_filename(id_, metric, seed_, fmt)), fmt);
    }
  }

  void write_text(const fs::path& file, const std::string& text) {
    const fs::path full = artifact(file);
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + full.string());
    out << text;
  }

  int positive(std::string_view key, std::int64_t fallback) const {
    const std::int64_t v = cfg.integer(key, fallback);
    if (v <= 0) cfg.fail(key, "must be positive");
    return static_cast<int>(v);
  }

  double fraction(std::string_view key, double fallback) const {
    const double v = cfg.number(key, fallback);
    if (!(v > 0.0 && v <= 1.0)) cfg.fail(key, "must lie in (0, 1]");
    return v;
  }

  PolicyKind policy(std::string_view key, std::string_view fallback) const {
    const std::string name = cfg.string(key, fallback);
    try {
      return parse_policy(name);
    } catch (const ConfigError& e) {
      cfg.fail(key, e.what());
    }
  }

  RunResult finish(std::map<std::string, double> summary) {
    std::sort(outputs_.begin(), outputs_.end());
    outputs_.erase(std::unique(outputs_.begin(), outputs_.end()), outputs_.end());
    nlohmann::json m;
    m["subcommand"] = subcommand_;
    m["experiment"] = id_;
    m["seed"] = seed_;
    m["version"] = version();
    m["config"] = cfg.text();
    m["overrides"] = cfg.overrides();
    m["outputs"] = outputs_;
    m["summary"] = nlohmann::json::object();
    for (const auto& [k, v] : summary) m["summary"][k] = format_double(v);
    const fs::path manifest = out_ / ("manifest_" + subcommand_ + ".json");
    std::ofstream out(manifest, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + manifest.string());
    out << m.dump(2) << "\n";
    return {out_, outputs_, manifest, std::move(summary)};
  }

 private:
  std::string subcommand_;
  std::optional<fs::path> root_;
  std::uint64_t seed_ = 0;
  std::string id_;
  fs::path out_;
  std::vector<std::string> outputs_;
};

// --- data ------------------------------------------------------------------

SceneConfig scene_from(const Run& run, const std::string& section, const SceneConfig& base) {
  const Config& c = run.cfg;
  SceneConfig s = base;
  auto key = [&](const char* k) { return section + "." + k; };
  s.width = static_cast<int>(c.integer(key("width"), s.width));
  s.height = static_cast<int>(c.integer(key("height"), s.height));
  s.channels = static_cast<int>(c.integer(key("channels"), s.channels));
  s.min_objects = static_cast<int>(c.integer(key("min_objects"), s.min_objects));
  s.max_objects = static_cast<int>(c.integer(key("max_objects"), s.max_objects));
  s.radius_min = c.number(key("radius_min"), s.radius_min);
  s.radius_max = c.number(key("radius_max"), s.radius_max);
  s.speed_min = c.number(key("speed_min"), s.speed_min);
  s.speed_max = c.number(key("speed_max"), s.speed_max);
  s.shift_interval = static_cast<int>(c.integer(key("shift_interval"), s.shift_interval));
  s.clutter = c.number(key("clutter"), s.clutter);
  s.num_frames = static_cast<int>(c.integer(key("num_frames"), s.num_frames));
  s.patch_size = static_cast<int>(c.integer("sensor.patch_size", 8));
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("[" + section + "] " + e.what());
  }
  return s;
}

struct Split {
  std::string section;
  std::uint64_t salt;
  std::size_t default_videos;
};

const Split kTrainSplit{"train_data", kSaltTrainData, 20};
const Split kEvalSplit{"eval_data", kSaltEvalData, 5};

SceneConfig split_scene(const Run& run, const Split& split) {
  SceneConfig base = scene_from(run, "train_data", SceneConfig{});
  SceneConfig s = split.section == "train_data" ? base : scene_from(run, split.section, base);
  const auto seed = run.cfg.integer_opt(split.section + ".seed");
  s.seed = seed ? static_cast<std::uint64_t>(*seed) : run.salt(split.salt);
  return s;
}

std::vector<Video> generate_split(const Run& run, const Split& split) {
  const SceneConfig scene = split_scene(run, split);
  const auto count = run.positive(split.section + ".videos", static_cast<std::int64_t>(split.default_videos));
  return generate_videos(scene, static_cast<std::size_t>(count), split.section == "train_data" ? "train" : "eval");
}

/// Reads `<section>.path` when set (it must exist), otherwise generates the
/// split in memory from the scene keys.
std::vector<Video> load_split(const Run& run, const Split& split) {
  const std::string key = split.section + ".path";
  if (auto path = run.cfg.string_opt(key)) {
    const fs::path p = run.resolve(*path);
    if (!fs::exists(p / "dataset.json")) run.cfg.fail(key, "no dataset at '" + p.string() + "' (run gen-data first)");
    return read_dataset(p);
  }
  return generate_split(run, split);
}

PatchGrid grid_for(const Run& run, const std::vector<Video>& videos) {
  if (videos.empty() || videos.front().frames.empty()) throw ConfigError("dataset has no frames");
  const Frame& f = videos.front().frames.front();
  const int p = run.positive("sensor.patch_size", 8);
  if (f.width % p != 0 || f.height % p != 0) {
    run.cfg.fail("sensor.patch_size", "does not divide the " + std::to_string(f.width) + "x" +
                                          std::to_string(f.height) + " frames");
  }
  return PatchGrid(f.width, f.height, p);
}

ReadoutCostModel cost_model(const Run& run) {
  return {run.cfg.number("sensor.energy_per_read", 1.0), run.cfg.number("sensor.energy_per_conversion", 1.0)};
}

// --- models ----------------------------------------------------------------

fs::path checkpoint_path(const Run& run, const std::string& key, const std::string& fallback) {
  return run.resolve(run.cfg.string_opt(key).value_or((run.out() / fallback).string()));
}

ParamStore load_checkpoint(const Run& run, const std::string& key, const fs::path& path, const ParamStore& like,
                           const char* producer) {
  if (!fs::exists(path)) {
    const std::string msg = "no checkpoint at '" + path.string() + "' (run " + producer + " first)";
    if (run.cfg.has(key)) run.cfg.fail(key, msg);
    throw ConfigError(msg);
  }
  ParamStore loaded = ParamStore::load(path);
  bool same = loaded.size() == like.size();
  for (const auto& [name, t] : like.params()) {
    same = same && loaded.contains(name) && loaded.get(name).shape() == t.shape();
  }
  if (!same) throw ConfigError("checkpoint '" + path.string() + "' does not match the configured model");
  return loaded;
}

Classifier make_classifier(const Run& run, const PatchGrid& grid, int channels) {
  const Config& c = run.cfg;
  const std::string kind_name = c.string("model.kind", "vit");
  ClassifierKind kind;
  try {
    kind = parse_classifier_kind(kind_name);
  } catch (const ConfigError& e) {
    c.fail("model.kind", e.what());
  }
  try {
    if (kind == ClassifierKind::vit) {
      ViTConfig v;
      v.patch_size = grid.patch_size();
      v.channels = channels;
      v.dim = static_cast<std::size_t>(run.positive("model.dim", 64));
      v.heads = static_cast<std::size_t>(run.positive("model.heads", 4));
      v.blocks = static_cast<std::size_t>(run.positive("model.blocks", 4));
      v.mlp_dim = static_cast<std::size_t>(run.positive("model.mlp_dim", 128));
      v.classes = kNumShapeClasses;
      v.max_patches = grid.num_patches();
      return Classifier::make_vit(v, run.salt(kSaltModelInit));
    }
    DenseConfig d;
    d.width = grid.width();
    d.height = grid.height();
    d.channels = channels;
    d.hidden1 = static_cast<std::size_t>(run.positive("model.hidden1", 64));
    d.hidden2 = static_cast<std::size_t>(run.positive("model.hidden2", 32));
    d.classes = kNumShapeClasses;
    return Classifier::make_dense(d, run.salt(kSaltModelInit));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[model] ") + e.what());
  }
}

std::string kind_name(const Classifier& m) { return m.kind == ClassifierKind::vit ? "vit" : "dense"; }

GRUConfig gru_config(const Run& run, const PatchGrid& grid, int channels) {
  GRUConfig g;
  g.input_per_patch = static_cast<std::size_t>(channels) + 1;
  g.num_patches = grid.num_patches();
  g.hidden = static_cast<std::size_t>(run.positive("gru.hidden", 128));
  return g;
}

struct LoadedGru {
  GRUConfig config;
  ParamStore params;
};

LoadedGru load_gru(const Run& run, const PatchGrid& grid, int channels) {
  LoadedGru g{gru_config(run, grid, channels), {}};
  const ParamStore like = init_gru_params(g.config, 0);
  g.params = load_checkpoint(run, "gru.checkpoint", checkpoint_path(run, "gru.checkpoint", "saccade.ckpt"), like,
                             "train-saccade");
  return g;
}

bool needs_gru(std::span<const PolicyKind> kinds) {
  return std::find(kinds.begin(), kinds.end(), PolicyKind::learned) != kinds.end();
}

double decayed_lr(double lr, double final_fraction, int epoch, int epochs) {
  return lr * (1.0 - (1.0 - final_fraction) * static_cast<double>(epoch) / static_cast<double>(epochs));
}

MetricReport curve(std::string name, std::string axis_name) {
  MetricReport r;
  r.name = std::move(name);
  r.axis_name = std::move(axis_name);
  return r;
}

EpisodeConfig episode_config(const Run& run) {
  EpisodeConfig ep;
  ep.period = run.positive("saccade.period", 4);
  ep.horizon = ep.period - 1;
  ep.budget = Budget::fraction(run.fraction("saccade.budget", 0.3));
  ep.tau_gt = run.cfg.number("saccade.tau_gt", 0.1);
  try {
    ep.target = parse_target_map(run.cfg.string("saccade.target", "attention"));
  } catch (const ConfigError& e) {
    run.cfg.fail("saccade.target", e.what());
  }
  return ep;
}

// --- per-frame masks for video pipelines ------------------------------------

/// Frame 0 is always fully sensed, as in the saccade protocol, so every
/// policy starts from the same observation.
class VideoMasks {
 public:
  VideoMasks(PolicyKind kind, double budget, double threshold, std::uint64_t seed, TargetMap oracle_map,
             const LoadedGru* gru)
      : kind_(kind), budget_(budget), threshold_(threshold), seed_(seed), map_(oracle_map), gru_(gru) {}

  std::vector<PatchMask> masks(const Video& video, std::size_t video_index, const PatchGrid& grid) const {
    const std::size_t n = grid.num_patches();
    std::vector<PatchMask> out;
    if (kind_ == PolicyKind::learned) {
      const SaccadeTrace trace =
          infer_saccade_video(video, gru_->params, gru_->config, grid, Budget::fraction(budget_));
      for (const TraceEntry& e : trace.frames) out.push_back(e.mask);
      return out;
    }
    for (std::size_t t = 0; t < video.frames.size(); ++t) {
      if (t == 0 || kind_ == PolicyKind::full || budget_ >= 1.0) {
        out.push_back(PatchMask::all(n));
        continue;
      }
      switch (kind_) {
        case PolicyKind::random:
          out.push_back(random_select(n, Budget::fraction(budget_), Rng::mix(Rng::mix(seed_, video_index), t)));
          break;
        case PolicyKind::oracle_topk:
        case PolicyKind::oracle_threshold: {
          if (!video.truth) throw ConfigError("oracle policy needs ground truth for video '" + video.name + "'");
          const PixelMap map = map_ == TargetMap::attention ? video.truth->attention(t) : video.truth->foreground(t);
          out.push_back(kind_ == PolicyKind::oracle_topk
                            ? oracle_select(map, grid, Budget::fraction(budget_))
                            : oracle_select(map, grid, ThresholdMode{threshold_}));
          break;
        }
        default:
          out.push_back(PatchMask::all(n));
      }
    }
    return out;
  }

 private:
  PolicyKind kind_;
  double budget_;
  double threshold_;
  std::uint64_t seed_;
  TargetMap map_;
  const LoadedGru* gru_;
};

// --- subcommands -------------------------------------------------------------

RunResult gen_data(Run& run) {
  std::map<std::string, double> summary;
  for (const Split* split : {&kTrainSplit, &kEvalSplit}) {
    const auto videos = generate_split(run, *split);
    const auto path = run.cfg.string_opt(split->section + ".path");
    const fs::path root = path ? run.resolve(*path) : run.out() / split->section;
    write_dataset(root, videos);
    for (const fs::path& f : dataset_files(videos)) run.record(root / f);
    std::size_t frames = 0;
    for (const Video& v : videos) frames += v.frames.size();
    summary[split->section + "/videos"] = static_cast<double>(videos.size());
    summary[split->section + "/frames"] = static_cast<double>(frames);
  }
  return run.finish(summary);
}

RunResult train_classifier(Run& run) {
  ClassificationSet set(load_split(run, kTrainSplit));
  const PatchGrid grid = grid_for(run, set.videos());
  const int channels = set.frame(0).channels;
  Classifier model = make_classifier(run, grid, channels);
  const std::string kind = kind_name(model);

  PolicySpec spec;
  spec.kind = run.policy("training.policy", "full");
  spec.threshold = run.cfg.number("training.threshold", 0.1);
  spec.seed = run.salt(kSaltTrainMasks);
  const double budget = run.fraction("training.budget", 1.0);
  std::optional<LoadedGru> gru;
  std::optional<LearnedPolicy> learned;
  if (spec.kind == PolicyKind::learned) {
    gru = load_gru(run, grid, channels);
    learned = LearnedPolicy{&gru->params, gru->config};
  }
  const MaskProvider masks(set, grid, spec, learned);

  ClassifierTrainConfig tc;
  tc.batch_size = static_cast<std::size_t>(run.positive("training.batch_size", 16));
  if (auto mb = run.cfg.number_opt("training.min_budget")) {
    if (!(*mb > 0.0 && *mb <= budget)) run.cfg.fail("training.min_budget", "must lie in (0, training.budget]");
    tc.min_budget = *mb;
  }
  const int epochs = run.positive("training.epochs", 10);
  const double lr = run.cfg.number("training.lr", 1e-3);
  const double final_fraction = run.cfg.number("training.lr_final_fraction", 1.0);
  Rng rng(run.salt(kSaltClassifierShuffle));

  MetricReport loss = curve("train_loss", "epoch"), acc = curve("train_accuracy", "epoch");
  for (int e = 0; e < epochs; ++e) {
    tc.adam.lr = decayed_lr(lr, final_fraction, e, epochs);
    const auto stats = train_classifier_epoch(set, masks, model, budget, tc, rng, static_cast<std::uint64_t>(e));
    loss.axis.push_back(e + 1);
    loss.values.push_back(stats.loss);
    acc.axis.push_back(e + 1);
    acc.values.push_back(stats.accuracy);
  }
  for (MetricReport* r : {&loss, &acc}) {
    r->metadata["model"] = kind;
    r->metadata["policy"] = std::string(policy_name(spec.kind));
  }
  run.emit(loss, "train-loss-" + kind);
  run.emit(acc, "train-accuracy-" + kind);
  const fs::path ckpt = checkpoint_path(run, "model.checkpoint", "classifier_" + kind + ".ckpt");
  model.params.save(run.place(ckpt));
  return run.finish({{"train_loss", loss.values.back()}, {"train_accuracy", acc.values.back()}});
}

RunResult eval_classify(Run& run) {
  ClassificationSet set(load_split(run, kEvalSplit));
  const PatchGrid grid = grid_for(run, set.videos());
  const int channels = set.frame(0).channels;
  Classifier model = make_classifier(run, grid, channels);
  const std::string kind = kind_name(model);
  model.params = load_checkpoint(run, "model.checkpoint",
                                 checkpoint_path(run, "model.checkpoint", "classifier_" + kind + ".ckpt"),
                                 model.params, "train-classifier");

  std::vector<PolicyKind> kinds;
  const auto names = run.cfg.strings("eval.policies", {"full", "random", "oracle-topk"});
  for (const std::string& n : names) {
    try {
      kinds.push_back(parse_policy(n));
    } catch (const ConfigError& e) {
      run.cfg.fail("eval.policies", e.what());
    }
  }
  const auto budgets = run.cfg.numbers("eval.budgets", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  for (double b : budgets) {
    if (!(b > 0.0 && b <= 1.0)) run.cfg.fail("eval.budgets", "every budget must lie in (0, 1]");
  }
  if (!std::is_sorted(budgets.begin(), budgets.end())) run.cfg.fail("eval.budgets", "must be ascending");

  std::optional<LoadedGru> gru;
  std::optional<LearnedPolicy> learned;
  if (needs_gru(kinds)) {
    gru = load_gru(run, grid, channels);
    learned = LearnedPolicy{&gru->params, gru->config};
  }

  std::map<std::string, double> summary;
  for (PolicyKind k : kinds) {
    const std::string pname(policy_name(k));
    if (k == PolicyKind::oracle_threshold) {
      // Threshold sets have no fixed size: sweep tau and report the
      // fraction actually sensed alongside accuracy.
      const auto taus = run.cfg.numbers("eval.thresholds", {0.05, 0.1, 0.25, 0.5, 0.75});
      MetricReport acc = curve("accuracy", "threshold"), frac = curve("fraction_sensed", "threshold");
      for (double tau : taus) {
        const MaskProvider masks(set, grid, {k, tau, 0});
        std::size_t correct = 0, sensed = 0;
        for (std::size_t i = 0; i < set.size(); ++i) {
          const PatchMask m = masks.mask(i, 0.5);
          sensed += m.count();
          if (model.predict(set.frame(i), grid, m) == set.label(i)) ++correct;
        }
        acc.axis.push_back(tau);
        acc.values.push_back(static_cast<double>(correct) / static_cast<double>(set.size()));
        frac.axis.push_back(tau);
        frac.values.push_back(static_cast<double>(sensed) / static_cast<double>(set.size() * grid.num_patches()));
      }
      for (MetricReport* r : {&acc, &frac}) {
        r->metadata["model"] = kind;
        r->metadata["policy"] = pname;
      }
      run.emit(acc, "accuracy-" + kind + "-" + pname);
      run.emit(frac, "fraction-" + kind + "-" + pname);
      continue;
    }
    const MaskProvider masks(set, grid, {k, 0.1, run.salt(kSaltEvalMasks)}, learned);
    const MetricReport report = classifier_accuracy_curve(set, masks, model, budgets);
    run.emit(report, "accuracy-" + kind + "-" + pname);
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      summary["accuracy/" + pname + "@" + format_double(budgets[i])] = report.values[i];
    }
  }
  return run.finish(summary);
}

RunResult train_saccade(Run& run) {
  const auto videos = load_split(run, kTrainSplit);
  const PatchGrid grid = grid_for(run, videos);
  const int channels = videos.front().frames.front().channels;
  const GRUConfig gc = gru_config(run, grid, channels);
  ParamStore params = init_gru_params(gc, run.salt(kSaltGruInit));
  const EpisodeConfig ep = episode_config(run);
  try {
    ep.validate(grid.num_patches());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[saccade] ") + e.what());
  }

  const int epochs = run.positive("training.epochs", 10);
  const double lr = run.cfg.number("training.lr", 1e-3);
  const double final_fraction = run.cfg.number("training.lr_final_fraction", 1.0);
  AdamConfig adam;
  Rng rng(run.salt(kSaltSaccadeShuffle));
  MetricReport loss = curve("window_loss", "epoch");
  for (int e = 0; e < epochs; ++e) {
    adam.lr = decayed_lr(lr, final_fraction, e, epochs);
    const auto stats = train_saccade_epoch(videos, params, gc, grid, ep, adam, rng);
    if (stats.windows == 0) throw ConfigError("no training windows: videos are shorter than saccade.period");
    loss.axis.push_back(e + 1);
    loss.values.push_back(stats.mean_window_loss);
  }
  loss.metadata["target"] = ep.target == TargetMap::attention ? "attention" : "foreground";
  run.emit(loss, "saccade-loss");
  const fs::path ckpt = checkpoint_path(run, "gru.checkpoint", "saccade.ckpt");
  params.save(run.place(ckpt));
  return run.finish({{"window_loss", loss.values.back()}});
}

RunResult eval_saccade(Run& run) {
  const auto videos = load_split(run, kEvalSplit);
  const PatchGrid grid = grid_for(run, videos);
  const int channels = videos.front().frames.front().channels;
  const LoadedGru gru = load_gru(run, grid, channels);
  const EpisodeConfig ep = episode_config(run);
  const double budget = run.fraction("saccade.budget", 0.3);
  const ReadoutCostModel cost = cost_model(run);

  MetricReport per_video = curve("auroc", "video"), pixels = curve("pixels_read", "video");
  double sum = 0.0;
  std::size_t frames = 0;
  for (std::size_t vi = 0; vi < videos.size(); ++vi) {
    SaccadeTrace trace = infer_saccade_video(videos[vi], gru.params, gru.config, grid, Budget::fraction(budget), cost);
    attach_labels(trace, videos[vi], grid, ep);
    write_trace(run.artifact(fs::path("traces") / (videos[vi].name + ".jsonl")), trace);
    std::size_t used = 0;
    const double a = trace_auroc(trace, &used);
    if (used > 0) {
      per_video.axis.push_back(static_cast<double>(vi));
      per_video.values.push_back(a);
      sum += a * static_cast<double>(used);
      frames += used;
    }
    pixels.axis.push_back(static_cast<double>(vi));
    pixels.values.push_back(static_cast<double>(trace.total_bandwidth().pixels_read));
  }
  if (frames == 0) throw MetricError("no evaluation frame has both positive and negative patch labels");
  MetricReport pooled = curve("auroc", "budget");
  pooled.axis = {budget};
  pooled.values = {sum / static_cast<double>(frames)};
  pooled.metadata["frames"] = std::to_string(frames);
  run.emit(pooled, "auroc");
  run.emit(per_video, "auroc-per-video");
  run.emit(pixels, "pixels-read");
  return run.finish({{"auroc", pooled.values.front()}, {"frames", static_cast<double>(frames)}});
}

RunResult eval_track(Run& run) {
  const auto eval_videos = load_split(run, kEvalSplit);
  const PatchGrid grid = grid_for(run, eval_videos);
  const int channels = eval_videos.front().frames.front().channels;

  ParamStore objectness;
  const ParamStore like = init_objectness_params(grid.patch_size(), channels, 0);
  if (run.cfg.has("tracking.objectness_checkpoint")) {
    const fs::path p = run.resolve(run.cfg.string("tracking.objectness_checkpoint", ""));
    objectness = load_checkpoint(run, "tracking.objectness_checkpoint", p, like, "eval-track");
  } else {
    const auto train_videos = load_split(run, kTrainSplit);
    objectness = init_objectness_params(grid.patch_size(), channels, run.salt(kSaltObjectness));
    ObjectnessTrainConfig oc;
    oc.epochs = run.positive("tracking.objectness_epochs", 10);
    oc.adam.lr = run.cfg.number("tracking.objectness_lr", 0.01);
    oc.seed = run.salt(kSaltObjectness);
    train_objectness(train_videos, grid, objectness, oc);
    const fs::path ckpt = run.artifact("objectness.ckpt");
    objectness.save(ckpt);
  }

  std::vector<PolicyKind> kinds;
  for (const std::string& n : run.cfg.strings("eval.policies", {"random", "learned"})) {
    try {
      kinds.push_back(parse_policy(n));
    } catch (const ConfigError& e) {
      run.cfg.fail("eval.policies", e.what());
    }
  }
  std::optional<LoadedGru> gru;
  if (needs_gru(kinds)) gru = load_gru(run, grid, channels);

  const double budget = run.fraction("tracking.budget", 0.3);
  TrackerConfig tc;
  tc.iou_min = run.cfg.number("tracking.iou_min", 0.3);
  tc.max_misses = run.positive("tracking.max_misses", 3);
  const double det_threshold = run.cfg.number("tracking.detector_threshold", 0.5);
  const double oracle_tau = run.cfg.number("tracking.threshold", 0.1);

  std::map<std::string, double> summary;
  for (PolicyKind k : kinds) {
    const std::string pname(policy_name(k));
    const VideoMasks source(k, budget, oracle_tau, run.salt(kSaltTrackMasks), TargetMap::foreground,
                            gru ? &*gru : nullptr);
    MetricReport mota = curve("mota", "video"), motp = curve("motp", "video");
    std::vector<ImageDetections> images;
    for (std::size_t vi = 0; vi < eval_videos.size(); ++vi) {
      const Video& v = eval_videos[vi];
      if (!v.truth) throw ConfigError("eval-track needs ground truth for video '" + v.name + "'");
      const auto masks = source.masks(v, vi, grid);
      GreedyTracker tracker(tc);
      for (std::size_t t = 0; t < v.frames.size(); ++t) {
        auto dets = detect_on_mask(v.frames[t], grid, masks[t], objectness, det_threshold);
        for (Detection& d : dets) d.frame = static_cast<int>(t);
        tracker.associate(dets);
        ImageDetections img;
        img.detections = dets;
        for (const ObjectTruth& o : v.truth->frames[t].objects) img.ground_truth.push_back(o.box);
        images.push_back(std::move(img));
      }
      write_tracks_csv(run.artifact(fs::path("tracks") / pname / (v.name + ".csv")), tracker.tracks());
      const MotResult r =
          clear_mot(gt_mot_frames(*v.truth), tracks_to_mot_frames(tracker.tracks(), v.frames.size()), tc.iou_min);
      mota.axis.push_back(static_cast<double>(vi));
      mota.values.push_back(r.mota);
      motp.axis.push_back(static_cast<double>(vi));
      motp.values.push_back(r.motp);
    }
    const auto thresholds = coco_iou_thresholds();
    MetricReport ap = curve("ap", "iou_threshold"), ar = curve("ar", "iou_threshold");
    for (double th : thresholds) {
      ap.axis.push_back(th);
      ap.values.push_back(average_precision(images, th));
      ar.axis.push_back(th);
      ar.values.push_back(average_recall(images, th, 100));
    }
    for (MetricReport* r : {&mota, &motp, &ap, &ar}) {
      r->metadata["policy"] = pname;
      r->metadata["budget"] = format_double(budget);
      run.emit(*r, r->name + "-" + pname);
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    summary["mota/" + pname] = mean(mota.values);
    summary["motp/" + pname] = mean(motp.values);
    summary["map/" + pname] = mean(ap.values);
    summary["mar/" + pname] = mean(ar.values);
  }
  return run.finish(summary);
}

RunResult mask_demo(Run& run) {
  const auto videos = load_split(run, kEvalSplit);
  const PatchGrid grid = grid_for(run, videos);
  const int channels = videos.front().frames.front().channels;
  const PolicyKind k = run.policy("demo.policy", "random");
  std::optional<LoadedGru> gru;
  if (k == PolicyKind::learned) gru = load_gru(run, grid, channels);
  const VideoMasks source(k, run.fraction("demo.budget", 0.3), run.cfg.number("demo.threshold", 0.1),
                          run.salt(kSaltDemoMasks), TargetMap::attention, gru ? &*gru : nullptr);
  const Video& v = videos.front();
  const auto masks = source.masks(v, 0, grid);
  const std::size_t frames = std::min<std::size_t>(v.frames.size(), run.positive("demo.frames", 8));
  const std::string pname(policy_name(k));
  std::string jsonl;
  BandwidthReport total;
  for (std::size_t t = 0; t < frames; ++t) {
    char name[64];
    std::snprintf(name, sizeof name, "frame_%06zu.ppm", t);
    write_pnm(run.artifact(fs::path("mask_demo") / pname / name), zero_fill(v.frames[t], grid, masks[t]));
    jsonl += mask_to_json(masks[t]) + "\n";
    total += readout_cost(masks[t], grid, channels, cost_model(run));
  }
  run.write_text(fs::path("mask_demo") / pname / "masks.jsonl", jsonl);
  return run.finish({{"fraction_sensed", static_cast<double>(total.pixels_read) / static_cast<double>(total.pixels_total)}});
}

}  // namespace

std::span<const std::string_view> subcommand_names() { return kSubcommands; }
std::span<const std::string_view> known_config_keys() { return kKnownKeys; }

RunResult run_subcommand(std::string_view name, const Config& config, const std::optional<fs::path>& output_root) {
  static const std::map<std::string_view, std::function<RunResult(Run&)>> table = {
      {"gen-data", gen_data},           {"train-classifier", train_classifier}, {"train-saccade", train_saccade},
      {"eval-classify", eval_classify}, {"eval-saccade", eval_saccade},         {"eval-track", eval_track},
      {"mask-demo", mask_demo},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown subcommand '" + std::string(name) + "'");
  Run run(name, config, output_root);
  return it->second(run);
}

}  // namespace saccade::cli
