#include "creyes/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "creyes/io_util.hpp"
#include "creyes/policy.hpp"

namespace creyes {

namespace {

constexpr long kMetricsEvery = 100;
constexpr int kReturnWindow = 20;

// Seed streams for the independent rng consumers of one training run.
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kInitStream = 3;
constexpr std::uint64_t kEpisodeStreamBase = 1000000;

std::vector<double> to_double(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

double huber(double e) { return std::fabs(e) <= 1.0 ? 0.5 * e * e : std::fabs(e) - 0.5; }

double huber_grad(double e) {
  if (e > 1.0) return 1.0;
  if (e < -1.0) return -1.0;
  return e;
}

}  // namespace

std::string to_string(Optimizer o) { return o == Optimizer::Sgd ? "sgd" : "adam"; }

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "sgd") return Optimizer::Sgd;
  if (s == "adam") return Optimizer::Adam;
  throw std::invalid_argument("train.optimizer must be sgd or adam");
}

void TrainConfig::validate() const {
  if (!(gamma >= 0.0) || gamma >= 1.0)
    throw std::invalid_argument("train.gamma must be in [0, 1)");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("train.learning_rate must be > 0");
  if (batch_size <= 0) throw std::invalid_argument("train.batch_size must be > 0");
  if (replay_capacity <= 0) throw std::invalid_argument("train.replay_capacity must be > 0");
  if (warmup <= 0) throw std::invalid_argument("train.warmup must be > 0");
  if (!(epsilon_start >= 0.0) || epsilon_start > 1.0)
    throw std::invalid_argument("train.epsilon_start must be in [0, 1]");
  if (!(epsilon_end >= 0.0) || epsilon_end > epsilon_start)
    throw std::invalid_argument("train.epsilon_end must be in [0, epsilon_start]");
  if (epsilon_decay_steps <= 0)
    throw std::invalid_argument("train.epsilon_decay_steps must be > 0");
  if (target_sync <= 0) throw std::invalid_argument("train.target_sync must be > 0");
  if (steps < 0) throw std::invalid_argument("train.steps must be >= 0");
}

double epsilon_at(const TrainConfig& cfg, long env_step) {
  if (env_step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
  const double frac =
      static_cast<double>(env_step) / static_cast<double>(cfg.epsilon_decay_steps);
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

TdTargets td_targets(const std::vector<Transition>& batch, const QNetwork& target_net,
                     double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_targets: empty batch");
  TdTargets out;
  out.motor.reserve(batch.size());
  out.sensory.reserve(batch.size());
  for (const Transition& t : batch) {
    const double r = static_cast<double>(t.reward);
    if (t.done) {
      out.motor.push_back(r);
      out.sensory.push_back(r);
      continue;
    }
    const HeadValues q = target_net.forward(to_double(t.next_obs));
    double best_motor = 0.0;
    bool any = false;
    for (int i = 0; i < kMotorActionCount; ++i) {
      if (!t.next_motor_mask[i]) continue;
      if (!any || q.motor[i] > best_motor) best_motor = q.motor[i];
      any = true;
    }
    if (!any) throw std::invalid_argument("td_targets: transition with no legal next action");
    const double best_sensory = *std::max_element(q.sensory.begin(), q.sensory.end());
    out.motor.push_back(r + gamma * best_motor);
    out.sensory.push_back(r + gamma * best_sensory);
  }
  return out;
}

TrainingStepper::TrainingStepper(QNetwork& net, const TrainConfig& cfg)
    : net_(net), target_(net), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.optimizer == Optimizer::Adam) {
    opt_.m.assign(net_.param_count(), 0.0);
    opt_.v.assign(net_.param_count(), 0.0);
  }
}

double TrainingStepper::step(const ReplayBuffer& replay, SplitMix64& sample_rng) {
  if (static_cast<long>(replay.size()) < cfg_.warmup)
    throw std::logic_error("train_step: replay below warmup size");

  const std::vector<std::size_t> idx =
      replay.sample_indices(static_cast<std::size_t>(cfg_.batch_size), sample_rng);
  std::vector<Transition> batch;
  batch.reserve(idx.size());
  for (std::size_t i : idx) batch.push_back(replay.at(i));

  const TdTargets targets = td_targets(batch, target_, cfg_.gamma);

  std::vector<double> grad(net_.param_count(), 0.0);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  ForwardCache cache;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = batch[i];
    const HeadValues q = net_.forward(to_double(t.obs), cache);
    const double em = q.motor[t.motor] - targets.motor[i];
    const double es = q.sensory[t.sensory] - targets.sensory[i];
    loss += (huber(em) + huber(es)) * inv_batch;
    std::array<double, kMotorActionCount> dmotor{};
    std::array<double, kSensoryCellCount> dsensory{};
    dmotor[t.motor] = huber_grad(em) * inv_batch;
    dsensory[t.sensory] = huber_grad(es) * inv_batch;
    net_.backward(cache, dmotor, dsensory, grad);
  }
  apply_gradient(grad);
  ++updates_;
  if (updates_ % cfg_.target_sync == 0) target_.params() = net_.params();
  return loss;
}

void TrainingStepper::apply_gradient(const std::vector<double>& grad) {
  std::vector<double>& p = net_.params();
  if (cfg_.optimizer == Optimizer::Sgd) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg_.learning_rate * grad[i];
    return;
  }
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;
  ++opt_.t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(opt_.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(opt_.t));
  for (std::size_t i = 0; i < p.size(); ++i) {
    opt_.m[i] = beta1 * opt_.m[i] + (1.0 - beta1) * grad[i];
    opt_.v[i] = beta2 * opt_.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = opt_.m[i] / c1;
    const double vhat = opt_.v[i] / c2;
    p[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + eps);
  }
}

TrainResult train(QNetwork& net, const LoopConfig& loop_cfg, const TrainConfig& cfg) {
  loop_cfg.validate();
  cfg.validate();

  SplitMix64 init_rng(mix_seed(cfg.seed, kInitStream));
  net.init_params(init_rng);
  SplitMix64 policy_rng(mix_seed(cfg.seed, kPolicyStream));
  SplitMix64 sample_rng(mix_seed(cfg.seed, kSampleStream));

  ReplayBuffer replay(static_cast<std::size_t>(cfg.replay_capacity));
  TrainingStepper stepper(net, cfg);
  SensorimotorLoop loop(loop_cfg);

  TrainResult result;
  long episode_index = 0;
  double episode_return = 0.0;
  loop.reset(mix_seed(cfg.seed, kEpisodeStreamBase + static_cast<std::uint64_t>(episode_index)));

  double last_loss = 0.0;
  auto mean_recent_return = [&]() {
    if (result.episode_returns.empty()) return 0.0;
    const std::size_t n = std::min<std::size_t>(kReturnWindow, result.episode_returns.size());
    const auto first = result.episode_returns.end() - static_cast<std::ptrdiff_t>(n);
    return std::accumulate(first, result.episode_returns.end(), 0.0) /
           static_cast<double>(n);
  };

  for (long t = 0; t < cfg.steps; ++t) {
    const double eps = epsilon_at(cfg, t);
    const std::vector<double> obs = net.encode(loop.canvas());
    const HeadValues q = net.forward(obs);
    const AgentAction a = select_action(q, eps, loop.legal_mask(), policy_rng);
    const LoopStep step = loop.apply(a.motor, a.sensory_cell);

    Transition tr;
    tr.obs.assign(obs.begin(), obs.end());
    tr.motor = static_cast<int>(a.motor);
    tr.sensory = a.sensory_cell;
    tr.reward = static_cast<float>(step.reward.training);
    const std::vector<double> next_obs = net.encode(loop.canvas());
    tr.next_obs.assign(next_obs.begin(), next_obs.end());
    tr.done = step.env.terminal;
    tr.next_motor_mask = step.env.terminal ? full_motor_mask() : loop.legal_mask();
    replay.push(std::move(tr));

    episode_return += step.reward.logged;
    if (step.env.terminal) {
      result.episode_returns.push_back(episode_return);
      episode_return = 0.0;
      ++episode_index;
      loop.reset(
          mix_seed(cfg.seed, kEpisodeStreamBase + static_cast<std::uint64_t>(episode_index)));
    }

    if (static_cast<long>(replay.size()) >= cfg.warmup)
      last_loss = stepper.step(replay, sample_rng);

    if ((t + 1) % kMetricsEvery == 0 || t + 1 == cfg.steps) {
      MetricsRow row;
      row.step = t + 1;
      row.loss = last_loss;
      row.epsilon = eps;
      row.mean_return = mean_recent_return();
      result.metrics.push_back(row);
    }
  }
  result.env_steps = cfg.steps;
  return result;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::filesystem::path& path) {
  std::string out = "step,loss,epsilon,mean_return\n";
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.step);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    out += format_double(r.epsilon);
    out += ',';
    out += format_double(r.mean_return);
    out += '\n';
  }
  write_text_file(path.string(), out);
}

}  // namespace creyes
