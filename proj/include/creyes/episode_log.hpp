#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "creyes/core.hpp"

namespace creyes {

// One agent step. Pause rows keep game_tick frozen and re-show the previous
// frame; the gaze still moves.
struct EpisodeStep {
  long step = 0;
  long game_tick = 0;
  MotorAction motor = MotorAction::Noop;      // chosen
  MotorAction effective = MotorAction::Noop;  // after sticky filtering
  int sensory_cell = 0;
  int gaze_x = 0;
  int gaze_y = 0;
  double emma_time_ms = 0.0;
  std::optional<double> frame_duration_ms;  // set on rows that close a displayed frame
  int score_delta = 0;
  long cumulative_score = 0;
  bool paused = false;
  bool terminal = false;

  // Kept in memory for training and analysis; not part of the CSV schema.
  double logged_reward = 0.0;
  double training_reward = 0.0;
};

struct EpisodeLog {
  std::vector<EpisodeStep> steps;

  long final_score() const { return steps.empty() ? 0 : steps.back().cumulative_score; }

  // Fills frame_duration_ms: each non-pause row displays a new frame whose
  // duration is one 50 ms tick plus the gaze-shift times of the pause rows
  // that follow it; the duration lands on the last row of that group.
  void finalize_frame_durations();
};

// Display durations in ms, one per displayed frame, in order. Pause rows
// before the first non-pause row extend the reset frame, which is not part
// of the log and therefore not counted.
std::vector<double> frame_display_durations(const EpisodeLog& log);

void write_episode_csv(const EpisodeLog& log, const std::filesystem::path& path);

// Strict reader for the writer's format; throws std::runtime_error naming the
// offending line.
EpisodeLog read_episode_csv(const std::filesystem::path& path);

}  // namespace creyes
