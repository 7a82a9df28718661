#include "creyes/reward.hpp"

#include <stdexcept>

namespace creyes {

void RewardConfig::validate() const {
  if (pause_penalty < 0.0) throw std::invalid_argument("reward.c_pause must be >= 0");
  if (saccade_cost_per_deg < 0.0) throw std::invalid_argument("reward.c_sacc must be >= 0");
}

RewardValue compute_reward(double score_delta, bool paused, double ecc_deg,
                           const RewardConfig& cfg) {
  if (ecc_deg < 0.0) throw std::invalid_argument("compute_reward: eccentricity must be >= 0");
  const double penalties =
      (paused ? cfg.pause_penalty : 0.0) + cfg.saccade_cost_per_deg * ecc_deg;
  RewardValue r;
  r.logged = score_delta - penalties;
  const double clipped =
      score_delta > 0.0 ? 1.0 : (score_delta < 0.0 ? -1.0 : 0.0);
  r.training = (cfg.clip_training_reward ? clipped : score_delta) - penalties;
  return r;
}

}  // namespace creyes
