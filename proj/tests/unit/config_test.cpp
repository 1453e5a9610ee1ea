#include <gtest/gtest.h>

#include <functional>
#include <string_view>

#include "config.hpp"
#include "saccade/error.hpp"

using saccade::ConfigError;
using saccade::cli::Config;

namespace {

constexpr std::string_view kText = R"([experiment]
id = "demo"
seed = 3

[training]
lr = 1e-3
epochs = 4
policy = "random"
budgets = [0.1, 0.5, 1]
)";

std::string message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, TypedLookups) {
  const Config c = Config::from_string(kText);
  EXPECT_EQ(c.string("experiment.id", ""), "demo");
  EXPECT_EQ(c.integer("experiment.seed", 0), 3);
  EXPECT_EQ(c.number("training.lr", 0.0), 1e-3);
  EXPECT_EQ(c.number("training.epochs", 0.0), 4.0);
  EXPECT_EQ(c.numbers("training.budgets", {}), (std::vector<double>{0.1, 0.5, 1.0}));
  EXPECT_EQ(c.integer("training.batch_size", 16), 16);
  EXPECT_FALSE(c.has("training.batch_size"));
  EXPECT_EQ(c.line_of("training.policy"), 8);
}

TEST(Config, WrongTypeNamesKeyAndLine) {
  const Config c = Config::from_string(kText);
  const auto msg = message([&] { c.integer("training.lr", 0); });
  EXPECT_NE(msg.find("'training.lr'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyNamesFirstOffender) {
  const Config c = Config::from_string(std::string(kText) + "\n[model]\ndepth = 3\n");
  const std::string_view known[] = {"experiment.id", "experiment.seed", "training.lr", "training.epochs",
                                    "training.policy"};
  const auto msg = message([&] { c.check_known(known); });
  EXPECT_NE(msg.find("'training.budgets' (line 9)"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrorCarriesPosition) {
  const auto msg = message([] { Config::from_string("[a]\nx = \n", "broken.toml"); });
  EXPECT_EQ(msg.rfind("broken.toml:2:", 0), 0u) << msg;
}

TEST(Config, OverridesReplaceAndAdd) {
  Config c = Config::from_string(kText);
  c.apply_override("training.lr=0.5");
  c.apply_override("training.policy=oracle-topk");
  c.apply_override("eval.budgets=[0.3, 1.0]");
  EXPECT_EQ(c.number("training.lr", 0.0), 0.5);
  EXPECT_EQ(c.string("training.policy", ""), "oracle-topk");
  EXPECT_EQ(c.numbers("eval.budgets", {}), (std::vector<double>{0.3, 1.0}));
  EXPECT_EQ(c.overrides().size(), 3u);
  const auto msg = message([&] { c.integer("training.lr", 0); });
  EXPECT_NE(msg.find("set on the command line"), std::string::npos) << msg;
  EXPECT_THROW(c.apply_override("nodot=1"), ConfigError);
  EXPECT_THROW(c.apply_override("training.lr"), ConfigError);
  EXPECT_THROW(c.apply_override("experiment.id.sub=1"), ConfigError);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(Config::from_file("/nonexistent/config.toml"), ConfigError);
}
