#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "creyes/loop.hpp"
#include "creyes/qnet.hpp"
#include "creyes/replay.hpp"
#include "creyes/rng.hpp"

namespace creyes {

enum class Optimizer { Sgd, Adam };

std::string to_string(Optimizer o);
Optimizer optimizer_from_string(const std::string& s);

struct TrainConfig {
  double gamma = 0.99;
  double learning_rate = 2.5e-4;
  int batch_size = 32;
  long replay_capacity = 100000;
  long warmup = 5000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  long epsilon_decay_steps = 100000;
  long target_sync = 1000;  // network updates between target refreshes
  long steps = 50000;       // environment step budget
  Optimizer optimizer = Optimizer::Sgd;
  std::uint64_t seed = 1;

  void validate() const;
};

// Exploration rate before environment step t (0-based), decayed linearly.
double epsilon_at(const TrainConfig& cfg, long env_step);

struct TdTargets {
  std::vector<double> motor;
  std::vector<double> sensory;
};

// One-step bootstrapped regression targets. Both heads share the stored
// scalar reward; the motor bootstrap respects the next state's action mask,
// terminal transitions contribute the reward alone.
TdTargets td_targets(const std::vector<Transition>& batch, const QNetwork& target_net,
                     double gamma);

struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
};

// Owns the target network and optimizer state; each step() samples a batch,
// regresses both heads against td_targets under a unit Huber loss, applies
// one parameter update, and refreshes the target every target_sync updates.
class TrainingStepper {
 public:
  TrainingStepper(QNetwork& net, const TrainConfig& cfg);

  // Throws std::logic_error until the replay holds warmup transitions.
  double step(const ReplayBuffer& replay, SplitMix64& sample_rng);

  const QNetwork& target() const { return target_; }
  long updates() const { return updates_; }

 private:
  void apply_gradient(const std::vector<double>& grad);

  QNetwork& net_;
  QNetwork target_;
  TrainConfig cfg_;
  OptimizerState opt_;
  long updates_ = 0;
};

struct MetricsRow {
  long step = 0;
  double loss = 0.0;
  double epsilon = 0.0;
  double mean_return = 0.0;  // over the last 20 finished episodes
};

struct TrainResult {
  std::vector<MetricsRow> metrics;
  std::vector<double> episode_returns;
  long env_steps = 0;
};

// Full training run: initializes the network from the config seed, interacts
// for cfg.steps environment steps across as many episodes as needed, and
// performs one update per step once the replay is warm. Deterministic in the
// configs alone.
TrainResult train(QNetwork& net, const LoopConfig& loop_cfg, const TrainConfig& cfg);

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::filesystem::path& path);

}  // namespace creyes
