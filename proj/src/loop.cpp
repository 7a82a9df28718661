#include "creyes/loop.hpp"

#include <stdexcept>

#include "creyes/policy.hpp"

namespace creyes {

void LoopConfig::validate() const {
  game.validate();
  fovea.validate();
  emma.validate();
  reward.validate();
  if (initial_cell < 0 || initial_cell >= fovea.cell_count())
    throw std::invalid_argument("loop: initial cell out of range");
}

SensorimotorLoop::SensorimotorLoop(LoopConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  reset(0);
}

void SensorimotorLoop::reset(std::uint64_t env_seed) {
  env_.emplace(cfg_.game, env_seed);
  canvas_ = ObservationCanvas::empty(cfg_.fovea);
  gaze_cell_ = cfg_.initial_cell;
  gaze_ = cell_center(gaze_cell_, cfg_.fovea);
  push_observation(canvas_, extract_patch(env_->frame(), gaze_cell_, cfg_.fovea));
  log_ = EpisodeLog{};
}

MotorMask SensorimotorLoop::legal_mask() const {
  MotorMask mask = env_->legal_motor_mask();
  if (!cfg_.allow_pause) mask[static_cast<int>(MotorAction::Pause)] = false;
  return mask;
}

LoopStep SensorimotorLoop::apply(MotorAction motor, int cell) {
  const MotorMask mask = legal_mask();
  if (!mask[static_cast<int>(motor)])
    throw std::logic_error("loop: motor action is masked");

  const GazePoint target = cell_center(cell, cfg_.fovea);
  const double ecc = eccentricity_deg(gaze_, target, cfg_.emma);
  const double shift_s = gaze_shift_time(gaze_, target, cfg_.emma);

  LoopStep out;
  out.env = env_->step(motor);
  out.reward = compute_reward(static_cast<double>(out.env.score_delta), out.env.paused, ecc,
                              cfg_.reward);
  out.ecc_deg = ecc;
  out.shift_time_s = shift_s;

  gaze_ = target;
  gaze_cell_ = cell;
  push_observation(canvas_, extract_patch(out.env.frame, cell, cfg_.fovea));

  EpisodeStep row;
  row.step = static_cast<long>(log_.steps.size());
  row.game_tick = env_->game_tick();
  row.motor = motor;
  row.effective = out.env.effective_motor;
  row.sensory_cell = cell;
  row.gaze_x = target.x;
  row.gaze_y = target.y;
  row.emma_time_ms = shift_s * 1000.0;
  row.score_delta = out.env.score_delta;
  row.cumulative_score = env_->score();
  row.paused = out.env.paused;
  row.terminal = out.env.terminal;
  row.logged_reward = out.reward.logged;
  row.training_reward = out.reward.training;
  log_.steps.push_back(row);
  return out;
}

EpisodeLog SensorimotorLoop::finish() const {
  EpisodeLog done = log_;
  done.finalize_frame_durations();
  return done;
}

EpisodeLog run_episode(const LoopConfig& cfg, const QNetwork& net, double epsilon,
                       std::uint64_t seed) {
  SensorimotorLoop loop(cfg);
  loop.reset(mix_seed(seed, kEnvSeedStream));
  SplitMix64 policy_rng(mix_seed(seed, kPolicySeedStream));
  while (!loop.terminal()) {
    const HeadValues q = net.forward(net.encode(loop.canvas()));
    const AgentAction a = select_action(q, epsilon, loop.legal_mask(), policy_rng);
    loop.apply(a.motor, a.sensory_cell);
  }
  return loop.finish();
}

}  // namespace creyes
