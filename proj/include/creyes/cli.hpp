#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace creyes {

// Command implementations behind the executable. Each writes its artifacts
// into out_dir and returns 0; configuration and usage problems throw
// std::invalid_argument, data and I/O problems throw std::runtime_error, and
// the executable maps those to exit codes 2 and 1.

struct TrainOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainOptions& opt);

struct RolloutOptions {
  std::filesystem::path config;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir;
  std::optional<long> episodes;
  bool pausing = true;
  std::optional<std::uint64_t> seed;
};

int cmd_rollout(const RolloutOptions& opt);

struct EvalOptions {
  std::vector<std::filesystem::path> logs;
  std::vector<std::filesystem::path> references;  // episode CSVs or gaze CSVs
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config;
  bool truncate_reference = false;
  std::optional<std::uint64_t> seed;
};

int cmd_eval(const EvalOptions& opt);

struct GridSearchOptions {
  std::filesystem::path config;
  std::filesystem::path grid;
  std::filesystem::path reference_histogram;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

int cmd_grid_search(const GridSearchOptions& opt);

struct ImportGazeOptions {
  std::filesystem::path input;
  std::filesystem::path out_dir;
};

int cmd_import_gaze(const ImportGazeOptions& opt);

}  // namespace creyes
