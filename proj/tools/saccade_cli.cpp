// SPDX-License-Identifier: Apache-2.0
//
//   saccade <subcommand> --config exp.toml [--set section.key=value ...]
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 runtime.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "saccade/error.hpp"
#include "saccade/version.hpp"

namespace cli = saccade::cli;

int main(int argc, char** argv) {
  CLI::App app{"Patch-selective sensing experiments"};
  app.set_version_flag("--version", saccade::version());
  app.require_subcommand(1, 1);

  std::string config_file;
  std::vector<std::string> overrides;
  const char* blurbs[] = {
      "write synthetic train/eval datasets",
      "train the ViT or dense classifier under a sensing policy",
      "train the recurrent saccade predictor",
      "accuracy against sensing budget for each policy",
      "run the saccade protocol on held-out videos; traces and AUROC",
      "detect and track under each policy; MOTA/MOTP and AP/AR",
      "dump zero-filled frames showing what a policy senses",
  };
  std::size_t i = 0;
  for (std::string_view name : cli::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(std::string(name), blurbs[i++]);
    sub->add_option("-c,--config", config_file, "experiment config (TOML)")->required();
    sub->add_option("--set", overrides, "override a config key, e.g. --set training.lr=0.01");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    cli::Config config = cli::Config::from_file(config_file);
    for (const std::string& o : overrides) config.apply_override(o);
    std::optional<std::filesystem::path> root;
    if (const char* env = std::getenv(cli::kOutputRootEnv); env && *env) root = env;
    const cli::RunResult result = cli::run_subcommand(subcommand, config, root);
    for (const auto& [key, value] : result.summary) std::cout << key << " = " << value << "\n";
    std::cout << "manifest: " << result.manifest.string() << "\n";
    return cli::kExitOk;
  } catch (const saccade::ConfigError& e) {
    std::cerr << "saccade " << subcommand << ": config error: " << e.what() << "\n";
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "saccade " << subcommand << ": error: " << e.what() << "\n";
    return cli::kExitRuntime;
  }
}
