#pragma once

#include <cstdint>
#include <optional>

#include "creyes/emma.hpp"
#include "creyes/env.hpp"
#include "creyes/episode_log.hpp"
#include "creyes/fovea.hpp"
#include "creyes/qnet.hpp"
#include "creyes/reward.hpp"

namespace creyes {

struct LoopConfig {
  GameSpec game;
  FoveaConfig fovea;
  EmmaParams emma;
  RewardConfig reward;
  bool allow_pause = true;
  int initial_cell = 12;  // center of the grid

  void validate() const;
};

struct LoopStep {
  StepResult env;
  RewardValue reward;
  double ecc_deg = 0.0;
  double shift_time_s = 0.0;
};

// The closed perception-action cycle: each apply() moves the gaze, steps the
// game, scores the step with pause and saccade penalties, folds the new
// glimpse into memory, and logs the row. Gaze shifts run concurrently with
// the motor action, so pause rows are the only place EMMA time stretches a
// displayed frame.
class SensorimotorLoop {
 public:
  explicit SensorimotorLoop(LoopConfig cfg);

  void reset(std::uint64_t env_seed);

  bool terminal() const { return env_->terminal(); }
  const ObservationCanvas& canvas() const { return canvas_; }
  GazePoint gaze() const { return gaze_; }
  int gaze_cell() const { return gaze_cell_; }
  const GameEnv& env() const { return *env_; }
  const EpisodeLog& log() const { return log_; }

  // Pause is masked here when pausing is disabled; the env only masks it at
  // the consecutive-pause cap.
  MotorMask legal_mask() const;

  LoopStep apply(MotorAction motor, int cell);

  // Log copy with frame durations filled in.
  EpisodeLog finish() const;

 private:
  LoopConfig cfg_;
  std::optional<GameEnv> env_;
  ObservationCanvas canvas_;
  GazePoint gaze_;
  int gaze_cell_ = 0;
  EpisodeLog log_;
};

// Seed streams derived from one episode seed.
inline constexpr std::uint64_t kEnvSeedStream = 0;
inline constexpr std::uint64_t kPolicySeedStream = 1;

// Full epsilon-greedy episode under the given network. Deterministic in
// (cfg, net parameters, epsilon, seed).
EpisodeLog run_episode(const LoopConfig& cfg, const QNetwork& net, double epsilon,
                       std::uint64_t seed);

}  // namespace creyes
