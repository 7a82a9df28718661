#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "creyes/features.hpp"
#include "creyes/policy.hpp"
#include "creyes/qnet.hpp"
#include "creyes/replay.hpp"
#include "creyes/reward.hpp"
#include "creyes/rng.hpp"
#include "creyes/trainer.hpp"

using namespace creyes;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "creyes_agent_test";
  fs::create_directories(dir);
  return dir;
}

QNetworkSpec linear_spec(int depth = 4) {
  QNetworkSpec s;
  s.variant = NetVariant::Linear;
  s.memory_depth = depth;
  return s;
}

QNetworkSpec deep_spec(int depth = 4) {
  QNetworkSpec s;
  s.variant = NetVariant::Deep;
  s.memory_depth = depth;
  return s;
}

const TensorDesc& find_tensor(const QNetwork& net, const std::string& name) {
  for (const auto& t : net.tensors()) {
    if (t.name == name) return t;
  }
  throw std::runtime_error("tensor not found: " + name);
}

std::vector<double> random_input(std::size_t n, SplitMix64& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.next_double();
  return x;
}

std::vector<float> random_obs(std::size_t n, SplitMix64& rng) {
  std::vector<float> x(n);
  for (auto& v : x) v = static_cast<float>(rng.next_double());
  return x;
}

}  // namespace

TEST_CASE("a fresh linear network outputs zero everywhere") {
  QNetwork net(linear_spec());
  SplitMix64 rng(1);
  net.init_params(rng);
  const auto x = random_input(net.input_size(), rng);
  const HeadValues q = net.forward(x);
  for (const double v : q.motor) CHECK(v == 0.0);
  for (const double v : q.sensory) CHECK(v == 0.0);
}

TEST_CASE("forward passes are pure") {
  QNetwork net(deep_spec(2));
  SplitMix64 rng(2);
  net.init_params(rng);
  const auto x = random_input(net.input_size(), rng);
  const HeadValues a = net.forward(x);
  const HeadValues b = net.forward(x);
  CHECK(a.motor == b.motor);
  CHECK(a.sensory == b.sensory);
}

TEST_CASE("linear head values are exact affine maps of the input") {
  QNetwork net(linear_spec(1));
  REQUIRE(net.input_size() == 25);
  SplitMix64 rng(3);
  for (auto& p : net.params()) p = rng.next_double() - 0.5;
  const auto x = random_input(25, rng);
  const HeadValues q = net.forward(x);

  const TensorDesc& mw = find_tensor(net, "motor_w");
  const TensorDesc& mb = find_tensor(net, "motor_b");
  const TensorDesc& sw = find_tensor(net, "sensory_w");
  const TensorDesc& sb = find_tensor(net, "sensory_b");
  for (int a = 0; a < kMotorActionCount; ++a) {
    double want = net.params()[mb.offset + a];
    for (int j = 0; j < 25; ++j) want += net.params()[mw.offset + a * 25 + j] * x[j];
    CHECK(q.motor[a] == doctest::Approx(want).epsilon(1e-12));
  }
  for (int s = 0; s < kSensoryCellCount; ++s) {
    double want = net.params()[sb.offset + s];
    for (int j = 0; j < 25; ++j) want += net.params()[sw.offset + s * 25 + j] * x[j];
    CHECK(q.sensory[s] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("deep layout matches the documented architecture") {
  QNetwork net(deep_spec(4));
  CHECK(net.input_size() == 4u * 84 * 84);
  CHECK(net.param_count() == 1700544u);
  CHECK(find_tensor(net, "conv1_w").dims == std::vector<int>{32, 4, 8, 8});
  CHECK(find_tensor(net, "conv2_w").dims == std::vector<int>{64, 32, 4, 4});
  CHECK(find_tensor(net, "conv3_w").dims == std::vector<int>{64, 64, 3, 3});
  CHECK(find_tensor(net, "fc_w").dims == std::vector<int>{512, 3136});
  CHECK(find_tensor(net, "motor_w").dims == std::vector<int>{7, 512});
  CHECK(find_tensor(net, "sensory_w").dims == std::vector<int>{25, 512});

  SplitMix64 rng(4);
  net.init_params(rng);
  ForwardCache cache;
  const auto x = random_input(net.input_size(), rng);
  const HeadValues q = net.forward(x, cache);
  CHECK(cache.conv1.size() == 32u * 20 * 20);
  CHECK(cache.conv2.size() == 64u * 9 * 9);
  CHECK(cache.conv3.size() == 64u * 7 * 7);
  CHECK(cache.fc.size() == 512u);
  for (const double v : cache.fc) CHECK(v >= 0.0);
  for (const double v : q.motor) CHECK(std::isfinite(v));
  for (const double v : q.sensory) CHECK(std::isfinite(v));
}

TEST_CASE("deep initialization draws scaled gaussians with zero biases") {
  QNetwork net(deep_spec(4));
  SplitMix64 rng(5);
  net.init_params(rng);

  const TensorDesc& w = find_tensor(net, "conv2_w");
  const double fan_in = 32.0 * 4 * 4;
  const double want_std = std::sqrt(2.0 / fan_in);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < w.size; ++i) {
    const double v = net.params()[w.offset + i];
    sum += v;
    sq += v * v;
  }
  const double mean = sum / w.size;
  const double stddev = std::sqrt(sq / w.size - mean * mean);
  CHECK(std::abs(mean) < 0.005);
  CHECK(stddev == doctest::Approx(want_std).epsilon(0.05));

  const TensorDesc& b = find_tensor(net, "conv2_b");
  for (std::size_t i = 0; i < b.size; ++i) CHECK(net.params()[b.offset + i] == 0.0);
  const TensorDesc& fb = find_tensor(net, "fc_b");
  for (std::size_t i = 0; i < fb.size; ++i) CHECK(net.params()[fb.offset + i] == 0.0);
}

TEST_CASE("linear encode equals the per-cell mean intensity features") {
  FoveaConfig cfg;
  ObservationCanvas canvas = ObservationCanvas::empty(cfg);
  SplitMix64 rng(6);
  Frame f;
  for (auto& p : f.px) p = static_cast<std::uint8_t>(rng.next_int(256));
  push_observation(canvas, extract_patch(f, 7, cfg));
  push_observation(canvas, extract_patch(f, 13, cfg));

  QNetwork net(linear_spec(4));
  const auto enc = net.encode(canvas);
  const auto feats = linear_features(canvas);
  REQUIRE(enc.size() == feats.size());
  REQUIRE(enc.size() == 100u);
  for (std::size_t i = 0; i < enc.size(); ++i) CHECK(enc[i] == feats[i]);
}

TEST_CASE("deep encode flattens the canvas newest layer first") {
  FoveaConfig cfg;
  cfg.memory_depth = 2;
  ObservationCanvas canvas = ObservationCanvas::empty(cfg);
  Frame f;
  f.fill_rect(0, 0, 84, 84, 255);
  push_observation(canvas, extract_patch(f, 12, cfg));

  QNetwork net(deep_spec(2));
  const auto enc = net.encode(canvas);
  REQUIRE(enc.size() == 2u * 84 * 84);
  const GazePoint c = cell_center(12, cfg);
  CHECK(enc[c.y * 84 + c.x] == 1.0);
  for (std::size_t i = 84 * 84; i < enc.size(); ++i) CHECK(enc[i] == 0.0);
}

TEST_CASE("encode rejects a canvas of the wrong depth") {
  FoveaConfig cfg;
  cfg.memory_depth = 2;
  QNetwork net(linear_spec(4));
  CHECK_THROWS_AS(net.encode(ObservationCanvas::empty(cfg)), std::invalid_argument);
}

TEST_CASE("greedy selection takes the per-head argmax") {
  SplitMix64 rng(7);
  HeadValues q{};
  q.motor[3] = 1.0;
  q.sensory[12] = 2.0;
  const AgentAction a = select_action(q, 0.0, full_motor_mask(), rng);
  CHECK(a.motor == MotorAction::Left);
  CHECK(a.sensory_cell == 12);
  CHECK_FALSE(a.explored);
}

TEST_CASE("greedy ties break toward the lowest index") {
  SplitMix64 rng(8);
  HeadValues q{};
  const AgentAction zero = select_action(q, 0.0, full_motor_mask(), rng);
  CHECK(zero.motor == MotorAction::Noop);
  CHECK(zero.sensory_cell == 0);

  q.motor[1] = 5.0;
  q.motor[4] = 5.0;
  const AgentAction tie = select_action(q, 0.0, full_motor_mask(), rng);
  CHECK(tie.motor == MotorAction::Up);
}

TEST_CASE("greedy selection skips masked actions") {
  SplitMix64 rng(9);
  HeadValues q{};
  q.motor[static_cast<int>(MotorAction::Pause)] = 10.0;
  q.motor[2] = 1.0;
  MotorMask mask = full_motor_mask();
  mask[static_cast<int>(MotorAction::Pause)] = false;
  const AgentAction a = select_action(q, 0.0, mask, rng);
  CHECK(a.motor == MotorAction::Down);
}

TEST_CASE("adding a constant to a head leaves the greedy pick unchanged") {
  SplitMix64 rng(10);
  HeadValues q{};
  for (int i = 0; i < kMotorActionCount; ++i) q.motor[i] = 0.1 * i * i - 0.3 * i;
  for (int i = 0; i < kSensoryCellCount; ++i) q.sensory[i] = std::sin(0.7 * i);
  const AgentAction base = select_action(q, 0.0, full_motor_mask(), rng);
  for (int i = 0; i < kMotorActionCount; ++i) q.motor[i] += 123.25;
  for (int i = 0; i < kSensoryCellCount; ++i) q.sensory[i] += -7.5;
  const AgentAction shifted = select_action(q, 0.0, full_motor_mask(), rng);
  CHECK(base.motor == shifted.motor);
  CHECK(base.sensory_cell == shifted.sensory_cell);
}

TEST_CASE("full exploration is uniform over the legal actions") {
  SplitMix64 rng(11);
  HeadValues q{};
  q.motor[0] = 100.0;
  std::array<int, kMotorActionCount> motor_counts{};
  std::array<int, kSensoryCellCount> sensory_counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const AgentAction a = select_action(q, 1.0, full_motor_mask(), rng);
    CHECK(a.explored);
    ++motor_counts[static_cast<int>(a.motor)];
    ++sensory_counts[a.sensory_cell];
  }
  for (const int c : motor_counts) {
    CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 7.0) < 0.02);
  }
  for (const int c : sensory_counts) {
    CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 25.0) < 0.015);
  }
}

TEST_CASE("exploration never selects a masked action") {
  SplitMix64 rng(12);
  MotorMask mask = full_motor_mask();
  mask[static_cast<int>(MotorAction::Pause)] = false;
  mask[static_cast<int>(MotorAction::Fire)] = false;
  HeadValues q{};
  for (int i = 0; i < 5000; ++i) {
    const AgentAction a = select_action(q, 1.0, mask, rng);
    CHECK(a.motor != MotorAction::Pause);
    CHECK(a.motor != MotorAction::Fire);
  }
}

TEST_CASE("selection with no legal action throws") {
  SplitMix64 rng(13);
  MotorMask mask{};
  CHECK_THROWS_AS(select_action(HeadValues{}, 0.5, mask, rng), std::invalid_argument);
}

TEST_CASE("selection consumes a fixed rng pattern") {
  HeadValues q{};
  SplitMix64 a(99), b(99);
  select_action(q, 0.0, full_motor_mask(), a);  // greedy: gate draw only
  b.next_double();
  CHECK(a.state() == b.state());

  SplitMix64 c(100), d(100);
  select_action(q, 1.0, full_motor_mask(), c);  // explore: gate, motor, sensory
  d.next_double();
  d.next_int(7);
  d.next_int(25);
  CHECK(c.state() == d.state());
}

TEST_CASE("reward bookkeeping splits logged and training values") {
  RewardConfig cfg;
  const RewardValue zero = compute_reward(0.0, false, 0.0, cfg);
  CHECK(zero.logged == 0.0);
  CHECK(zero.training == 0.0);

  const RewardValue collect = compute_reward(50.0, false, 10.0, cfg);
  CHECK(collect.logged == doctest::Approx(49.9).epsilon(1e-12));
  CHECK(collect.training == doctest::Approx(0.9).epsilon(1e-12));

  const RewardValue pause = compute_reward(0.0, true, 0.0, cfg);
  CHECK(pause.logged == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(pause.training == doctest::Approx(-0.1).epsilon(1e-12));

  const RewardValue losing = compute_reward(-3.0, false, 2.0, cfg);
  CHECK(losing.logged == doctest::Approx(-3.02).epsilon(1e-12));
  CHECK(losing.training == doctest::Approx(-1.02).epsilon(1e-12));

  RewardConfig unclipped = cfg;
  unclipped.clip_training_reward = false;
  const RewardValue raw = compute_reward(50.0, false, 10.0, unclipped);
  CHECK(raw.training == raw.logged);

  CHECK_THROWS_AS(compute_reward(0.0, false, -1.0, cfg), std::invalid_argument);
  RewardConfig bad;
  bad.pause_penalty = -0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("td targets bootstrap through the masked maximum") {
  QNetwork target(linear_spec(1));
  const TensorDesc& mb = find_tensor(target, "motor_b");
  const TensorDesc& sb = find_tensor(target, "sensory_b");
  for (int i = 0; i < kMotorActionCount; ++i) target.params()[mb.offset + i] = 0.1 * (i + 1);
  for (int i = 0; i < kSensoryCellCount; ++i) target.params()[sb.offset + i] = -0.01 * i;

  std::vector<Transition> batch(3);
  for (auto& t : batch) {
    t.obs.assign(25, 0.0f);
    t.next_obs.assign(25, 0.0f);
  }
  batch[0].reward = 2.0f;
  batch[0].done = true;
  batch[1].reward = 1.0f;
  batch[2].reward = -0.5f;
  batch[2].next_motor_mask.fill(false);
  batch[2].next_motor_mask[0] = true;
  batch[2].next_motor_mask[static_cast<int>(MotorAction::Pause)] = true;

  const TdTargets t = td_targets(batch, target, 0.5);
  CHECK(t.motor[0] == doctest::Approx(2.0));
  CHECK(t.sensory[0] == doctest::Approx(2.0));
  // Full mask: best motor bias is 0.7, best sensory bias is 0.
  CHECK(t.motor[1] == doctest::Approx(1.0 + 0.5 * 0.7).epsilon(1e-12));
  CHECK(t.sensory[1] == doctest::Approx(1.0 + 0.5 * 0.0).epsilon(1e-12));
  // Only NOOP and PAUSE legal next: best of 0.1 and 0.7.
  CHECK(t.motor[2] == doctest::Approx(-0.5 + 0.5 * 0.7).epsilon(1e-12));
  CHECK(t.sensory[2] == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS_AS(td_targets({}, target, 0.9), std::invalid_argument);
  batch[1].next_motor_mask.fill(false);
  CHECK_THROWS_AS(td_targets(batch, target, 0.9), std::invalid_argument);
}

TEST_CASE("td targets with gamma zero reduce to the rewards") {
  QNetwork target(linear_spec(1));
  SplitMix64 rng(14);
  for (auto& p : target.params()) p = rng.next_double();
  std::vector<Transition> batch(2);
  for (auto& t : batch) {
    t.obs.assign(25, 0.5f);
    t.next_obs = random_obs(25, rng);
  }
  batch[0].reward = 3.25f;
  batch[1].reward = -1.5f;
  const TdTargets t = td_targets(batch, target, 0.0);
  CHECK(t.motor[0] == doctest::Approx(3.25));
  CHECK(t.motor[1] == doctest::Approx(-1.5));
  CHECK(t.sensory[0] == doctest::Approx(3.25));
}

TEST_CASE("training below the warmup threshold throws") {
  QNetwork net(linear_spec(1));
  TrainConfig cfg;
  cfg.warmup = 10;
  TrainingStepper stepper(net, cfg);
  ReplayBuffer replay(100);
  Transition t;
  t.obs.assign(25, 0.0f);
  t.next_obs.assign(25, 0.0f);
  t.done = true;
  for (int i = 0; i < 9; ++i) replay.push(t);
  SplitMix64 rng(15);
  CHECK_THROWS_AS(stepper.step(replay, rng), std::logic_error);
}

TEST_CASE("a zero-residual batch leaves the parameters untouched") {
  QNetwork net(linear_spec(1));
  SplitMix64 init(16);
  net.init_params(init);  // all zeros for the linear variant
  TrainConfig cfg;
  cfg.warmup = 1;
  cfg.batch_size = 4;
  TrainingStepper stepper(net, cfg);
  ReplayBuffer replay(16);
  SplitMix64 rng(17);
  for (int i = 0; i < 8; ++i) {
    Transition t;
    t.obs = random_obs(25, rng);
    t.next_obs.assign(25, 0.0f);
    t.reward = 0.0f;
    t.done = true;
    replay.push(t);
  }
  const double loss = stepper.step(replay, rng);
  CHECK(loss == 0.0);
  for (const double p : net.params()) CHECK(p == 0.0);
}

TEST_CASE("one sgd step moves each parameter by minus lr times its gradient") {
  QNetwork net(linear_spec(1));
  TrainConfig cfg;
  cfg.warmup = 1;
  cfg.batch_size = 1;
  cfg.learning_rate = 0.5;
  TrainingStepper stepper(net, cfg);

  SplitMix64 rng(18);
  Transition t;
  t.obs = random_obs(25, rng);
  t.motor = 2;
  t.sensory = 7;
  t.reward = 1.0f;
  t.done = true;
  t.next_obs.assign(25, 0.0f);
  ReplayBuffer replay(4);
  replay.push(t);

  SplitMix64 sample_rng(19);
  const double loss = stepper.step(replay, sample_rng);
  // Residual is -1 on both heads: huber loss 0.5 each, gradient -1 each.
  CHECK(loss == doctest::Approx(1.0).epsilon(1e-12));

  const TensorDesc& mw = find_tensor(net, "motor_w");
  const TensorDesc& mb = find_tensor(net, "motor_b");
  const TensorDesc& sw = find_tensor(net, "sensory_w");
  const TensorDesc& sb = find_tensor(net, "sensory_b");
  for (int a = 0; a < kMotorActionCount; ++a) {
    for (int j = 0; j < 25; ++j) {
      const double want = a == 2 ? 0.5 * t.obs[j] : 0.0;
      CHECK(net.params()[mw.offset + a * 25 + j] == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(net.params()[mb.offset + a] == doctest::Approx(a == 2 ? 0.5 : 0.0));
  }
  for (int s = 0; s < kSensoryCellCount; ++s) {
    for (int j = 0; j < 25; ++j) {
      const double want = s == 7 ? 0.5 * t.obs[j] : 0.0;
      CHECK(net.params()[sw.offset + s * 25 + j] == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(net.params()[sb.offset + s] == doctest::Approx(s == 7 ? 0.5 : 0.0));
  }
}

TEST_CASE("the target network refreshes every target_sync updates") {
  QNetwork net(linear_spec(1));
  TrainConfig cfg;
  cfg.warmup = 1;
  cfg.batch_size = 2;
  cfg.target_sync = 3;
  TrainingStepper stepper(net, cfg);

  ReplayBuffer replay(8);
  SplitMix64 rng(20);
  for (int i = 0; i < 6; ++i) {
    Transition t;
    t.obs = random_obs(25, rng);
    t.next_obs.assign(25, 0.0f);
    t.reward = 1.0f;
    t.done = true;
    replay.push(t);
  }
  SplitMix64 sample_rng(21);
  stepper.step(replay, sample_rng);
  CHECK(stepper.target().params() != net.params());
  stepper.step(replay, sample_rng);
  CHECK(stepper.target().params() != net.params());
  stepper.step(replay, sample_rng);
  CHECK(stepper.target().params() == net.params());
  stepper.step(replay, sample_rng);
  CHECK(stepper.target().params() != net.params());
  CHECK(stepper.updates() == 4);
}

TEST_CASE("adam takes a bias-corrected first step of size lr") {
  QNetwork net(linear_spec(1));
  TrainConfig cfg;
  cfg.warmup = 1;
  cfg.batch_size = 1;
  cfg.learning_rate = 0.01;
  cfg.optimizer = Optimizer::Adam;
  TrainingStepper stepper(net, cfg);

  Transition t;
  t.obs.assign(25, 1.0f);
  t.motor = 0;
  t.sensory = 0;
  t.reward = 1.0f;
  t.done = true;
  t.next_obs.assign(25, 0.0f);
  ReplayBuffer replay(2);
  replay.push(t);
  SplitMix64 rng(22);
  stepper.step(replay, rng);

  // With bias correction the first update is lr * g / (|g| + eps) = lr
  // in magnitude for every parameter with a nonzero gradient.
  const TensorDesc& mb = find_tensor(net, "motor_b");
  CHECK(net.params()[mb.offset + 0] == doctest::Approx(0.01).epsilon(1e-6));
  const TensorDesc& mw = find_tensor(net, "motor_w");
  CHECK(net.params()[mw.offset + 0] == doctest::Approx(0.01).epsilon(1e-6));
  const TensorDesc& sb = find_tensor(net, "sensory_b");
  CHECK(net.params()[sb.offset + 1] == 0.0);
}

TEST_CASE("epsilon decays linearly and then stays at the floor") {
  TrainConfig cfg;
  CHECK(epsilon_at(cfg, 0) == doctest::Approx(1.0));
  CHECK(epsilon_at(cfg, 50000) == doctest::Approx(0.525));
  CHECK(epsilon_at(cfg, 100000) == doctest::Approx(0.05));
  CHECK(epsilon_at(cfg, 1000000) == doctest::Approx(0.05));
}

TEST_CASE("train config validation names the offending key") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), "train.gamma must be in [0, 1)", std::invalid_argument);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.epsilon_end = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("replay sampling is uniform with replacement") {
  ReplayBuffer replay(100);
  for (int i = 0; i < 100; ++i) {
    Transition t;
    t.reward = static_cast<float>(i);
    replay.push(t);
  }
  SplitMix64 rng(23);
  std::vector<long> counts(100, 0);
  const long n = 1000000;
  const auto idx = replay.sample_indices(n, rng);
  for (const auto i : idx) ++counts[i];
  for (const long c : counts) {
    CHECK(std::abs(static_cast<double>(c) / n - 0.01) < 0.001);
  }
}

TEST_CASE("the replay ring overwrites the oldest slots in order") {
  ReplayBuffer replay(3);
  for (int i = 1; i <= 5; ++i) {
    Transition t;
    t.reward = static_cast<float>(i);
    replay.push(t);
  }
  CHECK(replay.size() == 3);
  CHECK(replay.at(0).reward == 4.0f);
  CHECK(replay.at(1).reward == 5.0f);
  CHECK(replay.at(2).reward == 3.0f);
  CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("sampling an empty replay throws") {
  ReplayBuffer replay(4);
  SplitMix64 rng(24);
  CHECK_THROWS_AS(replay.sample_indices(1, rng), std::logic_error);
}

TEST_CASE("checkpoints round-trip parameters at single precision") {
  QNetwork net(linear_spec(4));
  SplitMix64 rng(25);
  for (auto& p : net.params()) p = rng.next_double() * 2.0 - 1.0;
  const fs::path path = temp_dir() / "linear.bin";
  net.save(path.string());
  const QNetwork back = QNetwork::load(path.string());
  CHECK(back.spec() == net.spec());
  REQUIRE(back.param_count() == net.param_count());
  for (std::size_t i = 0; i < net.param_count(); ++i) {
    CHECK(back.params()[i] == static_cast<double>(static_cast<float>(net.params()[i])));
  }
}

TEST_CASE("deep checkpoints round-trip too") {
  QNetwork net(deep_spec(4));
  SplitMix64 rng(26);
  net.init_params(rng);
  const fs::path path = temp_dir() / "deep.bin";
  net.save(path.string());
  const QNetwork back = QNetwork::load(path.string());
  CHECK(back.spec() == net.spec());
  const auto x = random_input(net.input_size(), rng);
  const HeadValues qa = QNetwork(net).forward(x);
  const HeadValues qb = back.forward(x);
  for (int i = 0; i < kMotorActionCount; ++i) {
    CHECK(qa.motor[i] == doctest::Approx(qb.motor[i]).epsilon(1e-5));
  }
}

TEST_CASE("corrupt checkpoints are rejected") {
  const fs::path dir = temp_dir();
  const fs::path good = dir / "good.bin";
  QNetwork net(linear_spec(1));
  net.save(good.string());

  std::ifstream in(good, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  const fs::path bad_magic = dir / "bad_magic.bin";
  std::string tampered = bytes;
  tampered[0] = 'X';
  std::ofstream(bad_magic, std::ios::binary).write(tampered.data(), tampered.size());
  CHECK_THROWS_AS(QNetwork::load(bad_magic.string()), std::runtime_error);

  const fs::path truncated = dir / "truncated.bin";
  std::ofstream(truncated, std::ios::binary).write(bytes.data(), bytes.size() / 2);
  CHECK_THROWS_AS(QNetwork::load(truncated.string()), std::runtime_error);

  const fs::path padded = dir / "padded.bin";
  std::string longer = bytes + "extra";
  std::ofstream(padded, std::ios::binary).write(longer.data(), longer.size());
  CHECK_THROWS_AS(QNetwork::load(padded.string()), std::runtime_error);

  CHECK_THROWS_AS(QNetwork::load((dir / "absent.bin").string()), std::runtime_error);
}

TEST_CASE("deep gradients match central finite differences") {
  QNetwork net(deep_spec(1));
  SplitMix64 rng(27);
  net.init_params(rng);
  const auto x = random_input(net.input_size(), rng);

  std::array<double, kMotorActionCount> dmotor{};
  std::array<double, kSensoryCellCount> dsensory{};
  for (auto& v : dmotor) v = rng.next_double() - 0.5;
  for (auto& v : dsensory) v = rng.next_double() - 0.5;

  const auto loss_at = [&](QNetwork& n) {
    const HeadValues q = n.forward(x);
    double L = 0.0;
    for (int i = 0; i < kMotorActionCount; ++i) L += dmotor[i] * q.motor[i];
    for (int i = 0; i < kSensoryCellCount; ++i) L += dsensory[i] * q.sensory[i];
    return L;
  };

  ForwardCache cache;
  net.forward(x, cache);
  std::vector<double> grad(net.param_count(), 0.0);
  net.backward(cache, dmotor, dsensory, grad);

  const double h = 1e-5;
  for (const char* name : {"conv1_w", "conv1_b", "conv2_w", "conv3_w", "fc_w", "motor_w",
                           "sensory_b"}) {
    const TensorDesc& t = find_tensor(net, name);
    const std::size_t k = t.offset + rng.next_int(static_cast<int>(t.size));
    const double saved = net.params()[k];
    net.params()[k] = saved + h;
    const double up = loss_at(net);
    net.params()[k] = saved - h;
    const double down = loss_at(net);
    net.params()[k] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(grad[k]), 1e-8});
    CHECK(std::abs(numeric - grad[k]) / denom < 1e-4);
  }
}
