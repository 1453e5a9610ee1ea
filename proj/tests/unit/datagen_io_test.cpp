#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <fstream>
#include <sstream>

#include "saccade/datagen.hpp"
#include "saccade/dataset_io.hpp"
#include "saccade/error.hpp"
#include "saccade/pnm.hpp"
#include "saccade/report.hpp"
#include "saccade/serialize.hpp"

using namespace saccade;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "saccade_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Generate, SameSeedSameVideo) {
  SceneConfig s;
  s.seed = 17;
  const Video a = generate_video(s), b = generate_video(s);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t t = 0; t < a.frames.size(); ++t) EXPECT_EQ(a.frames[t].data, b.frames[t].data);
  EXPECT_EQ(*a.truth, *b.truth);
  s.seed = 18;
  EXPECT_NE(generate_video(s).frames[0].data, a.frames[0].data);
}

TEST(Generate, FramesAreValidAndIndexed) {
  SceneConfig s;
  s.channels = 3;
  const Video v = generate_video(s);
  for (std::size_t t = 0; t < v.frames.size(); ++t) {
    EXPECT_NO_THROW(v.frames[t].validate());
    EXPECT_EQ(v.frames[t].time_index, static_cast<int>(t));
  }
}

TEST(Generate, SingleObjectAttentionIsItsSilhouette) {
  SceneConfig s;
  s.min_objects = s.max_objects = 1;
  s.clutter = 0.0;
  s.num_frames = 12;
  const Video v = generate_video(s);
  for (std::size_t t = 0; t < v.frames.size(); ++t) {
    const auto att = v.truth->attention(t);
    const auto& inst = v.truth->frames[t].instance;
    for (std::size_t i = 0; i < inst.size(); ++i) EXPECT_EQ(att.values[i], inst[i] >= 0 ? 1.0 : 0.0);
  }
}

TEST(Generate, AttentionLiesInsideForeground) {
  SceneConfig s;
  s.seed = 5;
  const Video v = generate_video(s);
  for (std::size_t t = 0; t < v.frames.size(); ++t) {
    const auto att = v.truth->attention(t), fg = v.truth->foreground(t);
    for (std::size_t i = 0; i < att.values.size(); ++i)
      if (att.values[i] > 0.0) {
        EXPECT_EQ(fg.values[i], 1.0);
      }
    const auto& ft = v.truth->frames[t];
    // The attended object may be fully occluded; when visible its class is the label.
    for (const auto& o : ft.objects)
      if (o.id == ft.attended_id) {
        EXPECT_EQ(o.cls, ft.label);
      }
  }
}

TEST(Generate, AttentionShiftsOnSchedule) {
  SceneConfig s;
  s.min_objects = 2;
  s.max_objects = 3;
  s.shift_interval = 5;
  s.num_frames = 20;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    s.seed = seed;
    const Video v = generate_video(s);
    std::vector<int> changes;
    for (std::size_t t = 1; t < 20; ++t)
      if (v.truth->frames[t].attended_id != v.truth->frames[t - 1].attended_id) changes.push_back(static_cast<int>(t));
    EXPECT_EQ(changes, (std::vector<int>{5, 10, 15})) << "seed " << seed;
  }
}

TEST(Generate, TrackIdsPersist) {
  SceneConfig s;
  s.clutter = 0.0;
  const Video v = generate_video(s);
  // Objects can vanish behind others, but an id always keeps its class.
  std::map<int, int> cls_of;
  for (const auto& ft : v.truth->frames)
    for (const auto& o : ft.objects) {
      const auto it = cls_of.emplace(o.id, o.cls).first;
      EXPECT_EQ(it->second, o.cls);
    }
  EXPECT_GE(cls_of.size(), static_cast<std::size_t>(s.min_objects));
}

TEST(Generate, BadConfigs) {
  SceneConfig s;
  s.patch_size = 5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.radius_max = 20;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.min_objects = 3;
  s.max_objects = 2;
  EXPECT_THROW(generate_video(s), ConfigError);
}

TEST(Pnm, RoundTripOnLattice) {
  const fs::path dir = fresh_dir("pnm");
  Frame f(5, 3, 3);
  for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] = static_cast<double>((i * 37) % 256) / 255.0;
  write_pnm(dir / "a.ppm", f);
  EXPECT_EQ(read_pnm(dir / "a.ppm").data, f.data);
  Frame g(4, 4, 1, 0.5);
  write_pnm(dir / "b.pgm", g);
  EXPECT_EQ(read_pnm(dir / "b.pgm").data, std::vector<double>(16, quantize_unit(0.5)));
}

TEST(Dataset, RoundTripIsBitExact) {
  SceneConfig s;
  s.num_frames = 6;
  s.channels = 3;
  const auto videos = generate_videos(s, 3);
  const fs::path root = fresh_dir("dataset");
  write_dataset(root, videos);
  for (const auto& rel : dataset_files(videos)) EXPECT_TRUE(fs::exists(root / rel)) << rel;
  const auto back = read_dataset(root);
  ASSERT_EQ(back.size(), videos.size());
  for (std::size_t v = 0; v < videos.size(); ++v) {
    EXPECT_EQ(back[v].name, videos[v].name);
    EXPECT_EQ(back[v].scene, videos[v].scene);
    ASSERT_EQ(back[v].frames.size(), videos[v].frames.size());
    for (std::size_t t = 0; t < videos[v].frames.size(); ++t) {
      EXPECT_EQ(back[v].frames[t].data, videos[v].frames[t].data);
      EXPECT_EQ(back[v].frames[t].time_index, videos[v].frames[t].time_index);
    }
    EXPECT_EQ(*back[v].truth, *videos[v].truth);
  }
}

TEST(Dataset, TruncatedGroundTruthNamesTheFile) {
  SceneConfig s;
  s.num_frames = 3;
  const fs::path root = fresh_dir("truncated");
  write_dataset(root, generate_videos(s, 1));
  const fs::path gt = root / "video_000" / "gt.json";
  ASSERT_TRUE(fs::exists(gt)) << "unexpected layout";
  fs::resize_file(gt, fs::file_size(gt) / 2);
  const std::string msg = error_of([&] { read_dataset(root); });
  EXPECT_NE(msg.find("gt.json"), std::string::npos) << msg;
}

TEST(Dataset, MissingMaskNamesTheFrame) {
  SceneConfig s;
  s.num_frames = 4;
  const fs::path root = fresh_dir("missing_mask");
  write_dataset(root, generate_videos(s, 1));
  fs::remove(root / "video_000" / "attention" / "mask_000002.pgm");
  const std::string msg = error_of([&] { read_dataset(root); });
  EXPECT_NE(msg.find("frame 2"), std::string::npos) << msg;
}

TEST(Dataset, MissingRootIsAnIoError) {
  EXPECT_THROW(read_dataset(fs::temp_directory_path() / "saccade_unit" / "no_such_dataset"), IoError);
}

TEST(Report, CsvHasHeaderPlusRows) {
  MetricReport r;
  r.name = "accuracy";
  r.axis_name = "budget";
  r.axis = {0.1, 0.5, 1.0};
  r.values = {0.25, 0.5, 0.75};
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "budget,value");
  r.stderr_values = std::vector<double>{0.01, 0.02, 0.03};
  EXPECT_EQ(report_to_csv(r).substr(0, 19), "budget,value,stderr");
}

TEST(Report, JsonRoundTrip) {
  MetricReport r;
  r.name = "auroc";
  r.axis = {0.3};
  r.values = {0.1 + 0.2};
  r.stderr_values = std::vector<double>{1.0 / 3.0};
  r.metadata = {{"seed", "7"}, {"policy", "learned"}};
  const fs::path dir = fresh_dir("report");
  const fs::path file = dir / report_filename("exp", "auroc", 7, ReportFormat::json);
  EXPECT_EQ(file.filename(), "exp_auroc_seed7.json");
  emit_report(r, file, ReportFormat::json);
  EXPECT_EQ(read_report_json(file), r);
  emit_report(r, dir / "a.csv", ReportFormat::csv);
  EXPECT_EQ(slurp(dir / "a.csv"), report_to_csv(r));
}

TEST(Report, RejectsMismatchAndNonFinite) {
  MetricReport r;
  r.name = "bad";
  r.axis = {0.1, 0.2};
  r.values = {1.0};
  EXPECT_THROW(r.validate(), ConfigError);
  EXPECT_THROW(emit_report(r, fresh_dir("bad") / "x.csv", ReportFormat::csv), ConfigError);
  r.values = {1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(r.validate(), ConfigError);
}

TEST(Report, ShortestRoundTripDoubles) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, 0.30000000000000004}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Serialize, MaskAndBandwidth) {
  const auto m = PatchMask::from_indices(8, {0, 3, 7});
  EXPECT_EQ(mask_to_json(m), "[0,3,7]");
  EXPECT_EQ(mask_from_json("[0,3,7]", 8), m);
  EXPECT_THROW(mask_from_json("[9]", 8), Error);
  const auto bw = readout_cost(m, PatchGrid(16, 8, 4), 1, {0.5, 2.0});
  const auto back = bandwidth_from_json(bandwidth_to_json(bw));
  EXPECT_EQ(back.pixels_read, bw.pixels_read);
  EXPECT_EQ(back.energy, bw.energy);
  EXPECT_EQ(back.fraction_sensed, bw.fraction_sensed);
}
