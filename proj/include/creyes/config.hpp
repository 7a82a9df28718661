#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "creyes/emma.hpp"
#include "creyes/env.hpp"
#include "creyes/fovea.hpp"
#include "creyes/loop.hpp"
#include "creyes/qnet.hpp"
#include "creyes/reward.hpp"
#include "creyes/trainer.hpp"

namespace creyes {

// Everything an experiment needs, stored as a flat "section.key = value"
// text file with '#' comments. Unknown keys are errors; omitted keys keep
// the defaults below; the resolved file echoed into every output directory
// re-parses to an identical config.
struct ExperimentConfig {
  GameSpec game;
  FoveaConfig fovea;
  EmmaParams emma;
  RewardConfig reward;
  NetVariant net_variant = NetVariant::Linear;
  TrainConfig train;
  double eval_epsilon = 0.01;
  int eval_episodes = 10;
  double saliency_sigma_px = 3.0;
  double saliency_fixation_radius_px = 2.0;
  double histogram_last_edge_ms = 500.0;

  void validate() const;

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_text(const std::string& text, const std::string& origin);

  // Canonical key order, resolved values, round-trip exact.
  std::string to_text() const;

  LoopConfig loop_config(bool allow_pause) const;
  QNetworkSpec net_spec() const;
};

struct GridAxes {
  std::vector<double> c_pause;
  std::vector<double> c_sacc;
};

// Grid file: "grid.c_pause = v, v, ..." and "grid.c_sacc = v, v, ..." in the
// same flat syntax. Both lists are required and must be non-empty.
GridAxes parse_grid_file(const std::filesystem::path& path);

}  // namespace creyes
