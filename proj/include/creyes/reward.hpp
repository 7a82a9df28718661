#pragma once

namespace creyes {

struct RewardConfig {
  double pause_penalty = 0.1;
  double saccade_cost_per_deg = 0.01;
  bool clip_training_reward = true;

  void validate() const;
};

// Every reward is computed in two flavors: the logged value keeps the raw
// score delta, the training value sign-clips the score delta before the
// penalties are subtracted so the penalties keep their configured scale.
struct RewardValue {
  double logged = 0.0;
  double training = 0.0;
};

RewardValue compute_reward(double score_delta, bool paused, double ecc_deg,
                           const RewardConfig& cfg);

}  // namespace creyes
