#include "creyes/episode_log.hpp"

#include <stdexcept>
#include <string>

#include "creyes/io_util.hpp"

namespace creyes {
namespace {

constexpr const char* kHeader =
    "step,game_tick,motor_action,effective_motor,sensory_cell,gaze_x_px,gaze_y_px,"
    "emma_time_ms,frame_duration_ms,score_delta,cumulative_score,paused,terminal";

// Indices of the last row of each displayed-frame group, paired with the
// frame's total display duration.
std::vector<std::pair<std::size_t, double>> display_groups(const EpisodeLog& log) {
  std::vector<std::pair<std::size_t, double>> groups;
  bool open = false;
  double duration = 0.0;
  std::size_t last_row = 0;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const EpisodeStep& s = log.steps[i];
    if (!s.paused) {
      if (open) groups.emplace_back(last_row, duration);
      open = true;
      duration = kTickMs;
      last_row = i;
    } else if (open) {
      duration += s.emma_time_ms;
      last_row = i;
    }
    // Pause rows before the first rendered frame extend the reset frame,
    // which is not a log row; they are skipped.
  }
  if (open) groups.emplace_back(last_row, duration);
  return groups;
}

}  // namespace

void EpisodeLog::finalize_frame_durations() {
  for (EpisodeStep& s : steps) s.frame_duration_ms.reset();
  for (const auto& [row, duration] : display_groups(*this))
    steps[row].frame_duration_ms = duration;
}

std::vector<double> frame_display_durations(const EpisodeLog& log) {
  std::vector<double> out;
  for (const auto& [row, duration] : display_groups(log)) out.push_back(duration);
  return out;
}

void write_episode_csv(const EpisodeLog& log, const std::filesystem::path& path) {
  std::string text(kHeader);
  text += '\n';
  for (const EpisodeStep& s : log.steps) {
    text += std::to_string(s.step);
    text += ',';
    text += std::to_string(s.game_tick);
    text += ',';
    text += to_string(s.motor);
    text += ',';
    text += to_string(s.effective);
    text += ',';
    text += std::to_string(s.sensory_cell);
    text += ',';
    text += std::to_string(s.gaze_x);
    text += ',';
    text += std::to_string(s.gaze_y);
    text += ',';
    text += format_double(s.emma_time_ms);
    text += ',';
    if (s.frame_duration_ms) text += format_double(*s.frame_duration_ms);
    text += ',';
    text += std::to_string(s.score_delta);
    text += ',';
    text += std::to_string(s.cumulative_score);
    text += ',';
    text += s.paused ? '1' : '0';
    text += ',';
    text += s.terminal ? '1' : '0';
    text += '\n';
  }
  write_text_file(path, text);
}

EpisodeLog read_episode_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != kHeader)
    throw std::runtime_error(path.string() + ": missing or malformed header");

  EpisodeLog log;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split(lines[i], ',');
    const std::string where = path.string() + ": line " + std::to_string(i + 1);
    if (f.size() != 13) throw std::runtime_error(where + ": expected 13 fields");

    EpisodeStep s;
    long long v = 0;
    double d = 0.0;
    if (!parse_long(f[0], v)) throw std::runtime_error(where + ": bad step");
    s.step = static_cast<long>(v);
    if (!parse_long(f[1], v)) throw std::runtime_error(where + ": bad game_tick");
    s.game_tick = static_cast<long>(v);
    try {
      s.motor = motor_action_from_string(f[2]);
      s.effective = motor_action_from_string(f[3]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    if (!parse_long(f[4], v) || v < 0 || v >= kSensoryCellCount)
      throw std::runtime_error(where + ": bad sensory_cell");
    s.sensory_cell = static_cast<int>(v);
    if (!parse_long(f[5], v)) throw std::runtime_error(where + ": bad gaze_x_px");
    s.gaze_x = static_cast<int>(v);
    if (!parse_long(f[6], v)) throw std::runtime_error(where + ": bad gaze_y_px");
    s.gaze_y = static_cast<int>(v);
    if (!parse_double(f[7], d)) throw std::runtime_error(where + ": bad emma_time_ms");
    s.emma_time_ms = d;
    if (!trim(f[8]).empty()) {
      if (!parse_double(f[8], d)) throw std::runtime_error(where + ": bad frame_duration_ms");
      s.frame_duration_ms = d;
    }
    if (!parse_long(f[9], v)) throw std::runtime_error(where + ": bad score_delta");
    s.score_delta = static_cast<int>(v);
    if (!parse_long(f[10], v)) throw std::runtime_error(where + ": bad cumulative_score");
    s.cumulative_score = static_cast<long>(v);
    if (f[11] != "0" && f[11] != "1") throw std::runtime_error(where + ": bad paused flag");
    s.paused = f[11] == "1";
    if (f[12] != "0" && f[12] != "1") throw std::runtime_error(where + ": bad terminal flag");
    s.terminal = f[12] == "1";
    log.steps.push_back(s);
  }
  return log;
}

}  // namespace creyes
