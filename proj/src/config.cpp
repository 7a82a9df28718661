#include "creyes/config.hpp"

#include <cmath>
#include <stdexcept>

#include "creyes/io_util.hpp"

namespace creyes {

namespace {

struct ParsedLine {
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<ParsedLine> parse_flat_file(const std::string& text, const std::string& origin) {
  std::vector<ParsedLine> out;
  int line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: missing '=' at " + origin + ":" +
                                  std::to_string(line_no));
    ParsedLine p;
    p.key = std::string(trim(stripped.substr(0, eq)));
    p.value = std::string(trim(stripped.substr(eq + 1)));
    p.line = line_no;
    if (p.key.empty())
      throw std::invalid_argument("config: empty key at " + origin + ":" +
                                  std::to_string(line_no));
    out.push_back(std::move(p));
  }
  return out;
}

[[noreturn]] void bad_value(const ParsedLine& p, const std::string& origin,
                            const char* expected) {
  throw std::invalid_argument("config: key '" + p.key + "' expects " + expected + ", got '" +
                              p.value + "' at " + origin + ":" + std::to_string(p.line));
}

double need_double(const ParsedLine& p, const std::string& origin) {
  double v = 0.0;
  if (!parse_double(p.value, v)) bad_value(p, origin, "a number");
  return v;
}

long need_long(const ParsedLine& p, const std::string& origin) {
  long long v = 0;
  if (!parse_long(p.value, v)) bad_value(p, origin, "an integer");
  return static_cast<long>(v);
}

int need_int(const ParsedLine& p, const std::string& origin) {
  return static_cast<int>(need_long(p, origin));
}

std::uint64_t need_u64(const ParsedLine& p, const std::string& origin) {
  std::uint64_t v = 0;
  if (!parse_u64(p.value, v)) bad_value(p, origin, "an unsigned integer");
  return v;
}

bool need_bool(const ParsedLine& p, const std::string& origin) {
  if (p.value == "true") return true;
  if (p.value == "false") return false;
  bad_value(p, origin, "true or false");
}

std::vector<double> need_double_list(const ParsedLine& p, const std::string& origin) {
  std::vector<double> out;
  for (const std::string& item : split(p.value, ',')) {
    const std::string_view t = trim(item);
    double v = 0.0;
    if (t.empty() || !parse_double(t, v)) bad_value(p, origin, "a comma-separated number list");
    out.push_back(v);
  }
  if (out.empty()) bad_value(p, origin, "a comma-separated number list");
  return out;
}

void apply_key(ExperimentConfig& cfg, const ParsedLine& p, const std::string& origin) {
  const std::string& k = p.key;
  if (k == "game.id") cfg.game.game = game_id_from_string(p.value);
  else if (k == "game.tick_hz") cfg.game.tick_hz = need_int(p, origin);
  else if (k == "game.frame_skip") cfg.game.frame_skip = need_int(p, origin);
  else if (k == "game.sticky_prob") cfg.game.sticky_prob = need_double(p, origin);
  else if (k == "game.max_steps") cfg.game.max_steps = need_long(p, origin);
  else if (k == "game.max_consecutive_pauses")
    cfg.game.max_consecutive_pauses = need_int(p, origin);
  else if (k == "fovea.patch_size") cfg.fovea.patch_size = need_int(p, origin);
  else if (k == "fovea.memory_depth") cfg.fovea.memory_depth = need_int(p, origin);
  else if (k == "emma.K") cfg.emma.K = need_double(p, origin);
  else if (k == "emma.k") cfg.emma.k = need_double(p, origin);
  else if (k == "emma.t_prep") cfg.emma.t_prep = need_double(p, origin);
  else if (k == "emma.t_exec_base") cfg.emma.t_exec_base = need_double(p, origin);
  else if (k == "emma.t_exec_per_deg") cfg.emma.t_exec_per_deg = need_double(p, origin);
  else if (k == "emma.f") cfg.emma.f = need_double(p, origin);
  else if (k == "emma.px_per_deg") cfg.emma.px_per_deg = need_double(p, origin);
  else if (k == "reward.c_pause") cfg.reward.pause_penalty = need_double(p, origin);
  else if (k == "reward.c_sacc") cfg.reward.saccade_cost_per_deg = need_double(p, origin);
  else if (k == "reward.clip_training_reward")
    cfg.reward.clip_training_reward = need_bool(p, origin);
  else if (k == "net.variant") cfg.net_variant = net_variant_from_string(p.value);
  else if (k == "train.gamma") cfg.train.gamma = need_double(p, origin);
  else if (k == "train.learning_rate") cfg.train.learning_rate = need_double(p, origin);
  else if (k == "train.batch_size") cfg.train.batch_size = need_int(p, origin);
  else if (k == "train.replay_capacity") cfg.train.replay_capacity = need_long(p, origin);
  else if (k == "train.warmup") cfg.train.warmup = need_long(p, origin);
  else if (k == "train.epsilon_start") cfg.train.epsilon_start = need_double(p, origin);
  else if (k == "train.epsilon_end") cfg.train.epsilon_end = need_double(p, origin);
  else if (k == "train.epsilon_decay_steps")
    cfg.train.epsilon_decay_steps = need_long(p, origin);
  else if (k == "train.target_sync") cfg.train.target_sync = need_long(p, origin);
  else if (k == "train.steps") cfg.train.steps = need_long(p, origin);
  else if (k == "train.optimizer") cfg.train.optimizer = optimizer_from_string(p.value);
  else if (k == "train.seed") cfg.train.seed = need_u64(p, origin);
  else if (k == "eval.epsilon") cfg.eval_epsilon = need_double(p, origin);
  else if (k == "eval.episodes") cfg.eval_episodes = need_int(p, origin);
  else if (k == "saliency.sigma_px") cfg.saliency_sigma_px = need_double(p, origin);
  else if (k == "saliency.fixation_radius_px")
    cfg.saliency_fixation_radius_px = need_double(p, origin);
  else if (k == "saliency.histogram_last_edge_ms")
    cfg.histogram_last_edge_ms = need_double(p, origin);
  else
    throw std::invalid_argument("config: unknown key '" + k + "' at " + origin + ":" +
                                std::to_string(p.line));
}


}  // namespace

void ExperimentConfig::validate() const {
  game.validate();
  fovea.validate();
  emma.validate();
  reward.validate();
  train.validate();
  if (!(eval_epsilon >= 0.0) || eval_epsilon > 1.0)
    throw std::invalid_argument("eval.epsilon must be in [0, 1]");
  if (eval_episodes < 0) throw std::invalid_argument("eval.episodes must be >= 0");
  if (!(saliency_sigma_px > 0.0))
    throw std::invalid_argument("saliency.sigma_px must be > 0");
  if (!(saliency_fixation_radius_px >= 0.0))
    throw std::invalid_argument("saliency.fixation_radius_px must be >= 0");
  if (!(histogram_last_edge_ms >= 100.0) ||
      std::fmod(histogram_last_edge_ms - 50.0, 50.0) != 0.0)
    throw std::invalid_argument(
        "saliency.histogram_last_edge_ms must be 100 plus a multiple of 50");
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return from_text(text, path.string());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text,
                                             const std::string& origin) {
  ExperimentConfig cfg;
  for (const ParsedLine& p : parse_flat_file(text, origin)) apply_key(cfg, p, origin);
  cfg.validate();
  return cfg;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("game.id", to_string(game.game));
  kv("game.tick_hz", std::to_string(game.tick_hz));
  kv("game.frame_skip", std::to_string(game.frame_skip));
  kv("game.sticky_prob", format_double(game.sticky_prob));
  kv("game.max_steps", std::to_string(game.max_steps));
  kv("game.max_consecutive_pauses", std::to_string(game.max_consecutive_pauses));
  kv("fovea.patch_size", std::to_string(fovea.patch_size));
  kv("fovea.memory_depth", std::to_string(fovea.memory_depth));
  kv("emma.K", format_double(emma.K));
  kv("emma.k", format_double(emma.k));
  kv("emma.t_prep", format_double(emma.t_prep));
  kv("emma.t_exec_base", format_double(emma.t_exec_base));
  kv("emma.t_exec_per_deg", format_double(emma.t_exec_per_deg));
  kv("emma.f", format_double(emma.f));
  kv("emma.px_per_deg", format_double(emma.px_per_deg));
  kv("reward.c_pause", format_double(reward.pause_penalty));
  kv("reward.c_sacc", format_double(reward.saccade_cost_per_deg));
  kv("reward.clip_training_reward", reward.clip_training_reward ? "true" : "false");
  kv("net.variant", to_string(net_variant));
  kv("train.gamma", format_double(train.gamma));
  kv("train.learning_rate", format_double(train.learning_rate));
  kv("train.batch_size", std::to_string(train.batch_size));
  kv("train.replay_capacity", std::to_string(train.replay_capacity));
  kv("train.warmup", std::to_string(train.warmup));
  kv("train.epsilon_start", format_double(train.epsilon_start));
  kv("train.epsilon_end", format_double(train.epsilon_end));
  kv("train.epsilon_decay_steps", std::to_string(train.epsilon_decay_steps));
  kv("train.target_sync", std::to_string(train.target_sync));
  kv("train.steps", std::to_string(train.steps));
  kv("train.optimizer", to_string(train.optimizer));
  kv("train.seed", std::to_string(train.seed));
  kv("eval.epsilon", format_double(eval_epsilon));
  kv("eval.episodes", std::to_string(eval_episodes));
  kv("saliency.sigma_px", format_double(saliency_sigma_px));
  kv("saliency.fixation_radius_px", format_double(saliency_fixation_radius_px));
  kv("saliency.histogram_last_edge_ms", format_double(histogram_last_edge_ms));
  return out;
}

LoopConfig ExperimentConfig::loop_config(bool allow_pause) const {
  LoopConfig cfg;
  cfg.game = game;
  cfg.fovea = fovea;
  cfg.emma = emma;
  cfg.reward = reward;
  cfg.allow_pause = allow_pause;
  return cfg;
}

QNetworkSpec ExperimentConfig::net_spec() const {
  QNetworkSpec spec;
  spec.variant = net_variant;
  spec.memory_depth = fovea.memory_depth;
  return spec;
}

GridAxes parse_grid_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(std::string("grid: ") + e.what());
  }
  const std::string origin = path.string();
  GridAxes axes;
  for (const ParsedLine& p : parse_flat_file(text, origin)) {
    if (p.key == "grid.c_pause") axes.c_pause = need_double_list(p, origin);
    else if (p.key == "grid.c_sacc") axes.c_sacc = need_double_list(p, origin);
    else
      throw std::invalid_argument("grid: unknown key '" + p.key + "' at " + origin + ":" +
                                  std::to_string(p.line));
  }
  if (axes.c_pause.empty())
    throw std::invalid_argument("grid: missing grid.c_pause list in " + origin);
  if (axes.c_sacc.empty())
    throw std::invalid_argument("grid: missing grid.c_sacc list in " + origin);
  return axes;
}

}  // namespace creyes
