#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "creyes/cli.hpp"

namespace {

// Exit codes: 0 success, 1 runtime/data error, 2 usage or config error.
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CR-Eyes: foveated sensorimotor agents on pausable micro-games"};
  app.require_subcommand(1);

  creyes::TrainOptions train_opt;
  std::uint64_t seed_value = 0;

  CLI::App* train = app.add_subcommand("train", "Train a network and write a checkpoint");
  train->add_option("--config", train_opt.config, "Experiment config file")->required();
  train->add_option("--out", train_opt.out_dir, "Output directory")->required();
  CLI::Option* train_seed = train->add_option("--seed", seed_value, "Override train.seed");

  creyes::RolloutOptions roll_opt;
  long episodes_value = 0;
  std::string pausing_value = "on";

  CLI::App* rollout = app.add_subcommand("rollout", "Roll out a trained checkpoint");
  rollout->add_option("--config", roll_opt.config, "Experiment config file")->required();
  rollout->add_option("--checkpoint", roll_opt.checkpoint, "Checkpoint file")->required();
  rollout->add_option("--out", roll_opt.out_dir, "Output directory")->required();
  CLI::Option* roll_episodes =
      rollout->add_option("--episodes", episodes_value, "Episode count override");
  rollout->add_option("--pausing", pausing_value, "on|off: allow the pause action")
      ->check(CLI::IsMember({"on", "off"}));
  CLI::Option* roll_seed = rollout->add_option("--seed", seed_value, "Override train.seed");

  creyes::EvalOptions eval_opt;
  std::string eval_config;

  CLI::App* eval = app.add_subcommand("eval", "Build evaluation reports from episode logs");
  eval->add_option("logs", eval_opt.logs, "Agent episode CSVs")->required();
  eval->add_option("--reference", eval_opt.references,
                   "Reference logs (episode CSVs or gaze CSVs)");
  eval->add_option("--out", eval_opt.out_dir, "Output directory")->required();
  CLI::Option* eval_cfg = eval->add_option("--config", eval_config, "Experiment config file");
  eval->add_flag("--truncate-reference", eval_opt.truncate_reference,
                 "Cut references to the mean agent episode length");
  CLI::Option* eval_seed = eval->add_option("--seed", seed_value, "Random-baseline seed");

  creyes::GridSearchOptions grid_opt;

  CLI::App* grid = app.add_subcommand("grid-search", "Calibrate penalties against a reference");
  grid->add_option("--config", grid_opt.config, "Experiment config file")->required();
  grid->add_option("--grid", grid_opt.grid, "Grid file with penalty value lists")->required();
  grid->add_option("--reference-histogram", grid_opt.reference_histogram,
                   "Reference duration histogram CSV")
      ->required();
  grid->add_option("--out", grid_opt.out_dir, "Output directory")->required();
  CLI::Option* grid_seed = grid->add_option("--seed", seed_value, "Override train.seed");

  creyes::ImportGazeOptions import_opt;

  CLI::App* import_gaze = app.add_subcommand("import-gaze", "Normalize a human gaze CSV");
  import_gaze->add_option("input", import_opt.input, "Gaze CSV file")->required();
  import_gaze->add_option("--out", import_opt.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*train) {
      if (*train_seed) train_opt.seed = seed_value;
      return creyes::cmd_train(train_opt);
    }
    if (*rollout) {
      if (*roll_episodes) roll_opt.episodes = episodes_value;
      if (*roll_seed) roll_opt.seed = seed_value;
      roll_opt.pausing = pausing_value == "on";
      return creyes::cmd_rollout(roll_opt);
    }
    if (*eval) {
      if (*eval_cfg) eval_opt.config = eval_config;
      if (*eval_seed) eval_opt.seed = seed_value;
      return creyes::cmd_eval(eval_opt);
    }
    if (*grid) {
      if (*grid_seed) grid_opt.seed = seed_value;
      return creyes::cmd_grid_search(grid_opt);
    }
    if (*import_gaze) return creyes::cmd_import_gaze(import_opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
