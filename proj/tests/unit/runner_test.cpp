#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "runner.hpp"
#include "saccade/error.hpp"

using namespace saccade::cli;
namespace fs = std::filesystem;

namespace {

constexpr const char* kTiny = R"([experiment]
id = "tiny"
seed = 5

[sensor]
patch_size = 8

[train_data]
videos = 4
num_frames = 4
min_objects = 1
max_objects = 1

[eval_data]
videos = 2

[model]
dim = 8
heads = 2
blocks = 1
mlp_dim = 16

[training]
epochs = 1

[eval]
policies = ["random", "oracle-topk"]
budgets = [0.25, 0.5, 1.0]
)";

fs::path fresh_root(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "saccade_runner" / name;
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

std::map<std::string, std::string> csvs(const RunResult& r) {
  std::map<std::string, std::string> out;
  for (const auto& rel : r.outputs)
    if (fs::path(rel).extension() == ".csv") out[rel] = slurp(r.output_dir / rel);
  return out;
}

RunResult run_all(const fs::path& root) {
  const Config c = Config::from_string(kTiny);
  run_subcommand("gen-data", c, root);
  run_subcommand("train-classifier", c, root);
  return run_subcommand("eval-classify", c, root);
}

}  // namespace

TEST(Runner, ClassificationPipelineIsDeterministic) {
  const RunResult a = run_all(fresh_root("a"));
  const RunResult b = run_all(fresh_root("b"));
  const auto ca = csvs(a), cb = csvs(b);
  ASSERT_FALSE(ca.empty());
  EXPECT_EQ(ca, cb);
  EXPECT_TRUE(fs::exists(a.manifest));
  EXPECT_EQ(a.manifest.filename(), "manifest_eval-classify.json");
  for (const auto& [rel, text] : ca) EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4) << rel;
}

TEST(Runner, MissingSeedIsAConfigError) {
  const Config c = Config::from_string("[experiment]\nid = \"x\"\n");
  EXPECT_THROW(run_subcommand("gen-data", c, fresh_root("noseed")), saccade::ConfigError);
}

TEST(Runner, UnknownKeyAndSubcommand) {
  const Config c = Config::from_string("[experiment]\nid = \"x\"\nseed = 1\n[training]\nepoch = 3\n");
  try {
    run_subcommand("gen-data", c, fresh_root("unknown"));
    FAIL() << "expected a config error";
  } catch (const saccade::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'training.epoch' (line 5)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_subcommand("fly", Config::from_string(kTiny), fresh_root("fly")), saccade::ConfigError);
}

TEST(Runner, EvalWithoutDatasetNamesThePathKey) {
  Config c = Config::from_string(kTiny);
  c.apply_override("eval_data.path=missing/data");
  try {
    run_subcommand("eval-classify", c, fresh_root("nodata"));
    FAIL() << "expected a config error";
  } catch (const saccade::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("eval_data.path"), std::string::npos) << e.what();
  }
}

TEST(Runner, KnownKeysCoverSubcommands) {
  EXPECT_EQ(subcommand_names().size(), 7u);
  EXPECT_GT(known_config_keys().size(), 40u);
}
