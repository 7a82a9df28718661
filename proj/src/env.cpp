#include "creyes/env.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace creyes {
namespace {

constexpr int kCellPx = 16;
constexpr int kPlayfieldOffset = 2;  // 80x80 playfield centered in the 84x84 frame

int clamp_int(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

std::uint32_t lcg_next(std::uint32_t x) {
  return static_cast<std::uint32_t>((1103515245ull * x + 12345ull) & 0x7FFFFFFFull);
}

}  // namespace

const char* to_string(GameId id) {
  switch (id) {
    case GameId::ChaseDot: return "CHASE_DOT";
    case GameId::LaneCollect: return "LANE_COLLECT";
  }
  throw std::invalid_argument("unknown game id");
}

GameId game_id_from_string(const std::string& s) {
  if (s == "CHASE_DOT") return GameId::ChaseDot;
  if (s == "LANE_COLLECT") return GameId::LaneCollect;
  throw std::invalid_argument("unknown game id: " + s);
}

void GameSpec::validate() const {
  if (tick_hz != kTickHz) throw std::invalid_argument("game.tick_hz must be 20");
  if (frame_skip < 1) throw std::invalid_argument("game.frame_skip must be >= 1");
  if (sticky_prob < 0.0 || sticky_prob >= 1.0)
    throw std::invalid_argument("game.sticky_prob must be in [0, 1)");
  if (max_steps < 0) throw std::invalid_argument("game.max_steps must be >= 0");
  if (max_consecutive_pauses < 1)
    throw std::invalid_argument("game.max_consecutive_pauses must be >= 1");
}

MotorAction apply_sticky(MotorAction prev, MotorAction chosen, double xi, SplitMix64& rng) {
  const double u = rng.next_double();  // exactly one draw per call
  if (chosen == MotorAction::Pause) return chosen;
  return u < xi ? prev : chosen;
}

void ChaseDotCore::reset(std::uint64_t seed) {
  avatar_row_ = 2;
  avatar_col_ = 2;
  lcg_ = static_cast<std::uint32_t>(seed & 0x7FFFFFFFull);
  respawn_target();
}

void ChaseDotCore::respawn_target() {
  // Redraw until the spawn differs from the avatar's cell.
  do {
    lcg_ = lcg_next(lcg_);
    const int cell = static_cast<int>(lcg_ % 25u);
    target_row_ = cell / 5;
    target_col_ = cell % 5;
  } while (target_row_ == avatar_row_ && target_col_ == avatar_col_);
}

int ChaseDotCore::tick(MotorAction a) {
  switch (a) {
    case MotorAction::Up: avatar_row_ = clamp_int(avatar_row_ - 1, 0, 4); break;
    case MotorAction::Down: avatar_row_ = clamp_int(avatar_row_ + 1, 0, 4); break;
    case MotorAction::Left: avatar_col_ = clamp_int(avatar_col_ - 1, 0, 4); break;
    case MotorAction::Right: avatar_col_ = clamp_int(avatar_col_ + 1, 0, 4); break;
    case MotorAction::Noop:
    case MotorAction::Fire:  // FIRE is a no-op in this game
      break;
    case MotorAction::Pause:
      throw std::logic_error("pause must be handled by the wrapper");
  }
  if (avatar_row_ == target_row_ && avatar_col_ == target_col_) {
    respawn_target();
    return 1;
  }
  return 0;
}

void ChaseDotCore::render(Frame& f) const {
  f.px.fill(0);
  f.fill_rect(kPlayfieldOffset + target_col_ * kCellPx, kPlayfieldOffset + target_row_ * kCellPx,
              kCellPx, kCellPx, kTargetIntensity);
  f.fill_rect(kPlayfieldOffset + avatar_col_ * kCellPx, kPlayfieldOffset + avatar_row_ * kCellPx,
              kCellPx, kCellPx, kAvatarIntensity);
}

void LaneCollectCore::reset(std::uint64_t /*seed*/) {
  lane_ = 2;
  avatar_x_ = 38;
  hit_hazard_ = false;
  objects_.clear();
}

int LaneCollectCore::tick(MotorAction a, SplitMix64& rng) {
  const int max_x = kFrameDim - kBlockSize;
  switch (a) {
    case MotorAction::Up: lane_ = clamp_int(lane_ - 1, 0, kLaneCount - 1); break;
    case MotorAction::Down: lane_ = clamp_int(lane_ + 1, 0, kLaneCount - 1); break;
    case MotorAction::Left: avatar_x_ = clamp_int(avatar_x_ - kAvatarStepX, 0, max_x); break;
    case MotorAction::Right: avatar_x_ = clamp_int(avatar_x_ + kAvatarStepX, 0, max_x); break;
    case MotorAction::Noop:
    case MotorAction::Fire:
      break;
    case MotorAction::Pause:
      throw std::logic_error("pause must be handled by the wrapper");
  }

  for (Object& o : objects_) o.x += o.dx;
  std::erase_if(objects_, [](const Object& o) {
    return (o.dx > 0 && o.x >= kFrameDim) || (o.dx < 0 && o.x + kBlockSize <= 0);
  });

  // Spawn order is fixed (lane 0..4, left side then right) so the rng stream
  // is reproducible.
  for (int lane = 0; lane < kLaneCount; ++lane) {
    if (rng.next_double() < kSpawnProb) {
      const bool hazard = rng.next_double() >= 0.5;
      objects_.push_back({lane, -kBlockSize, kObjectSpeed, hazard});
    }
    if (rng.next_double() < kSpawnProb) {
      const bool hazard = rng.next_double() >= 0.5;
      objects_.push_back({lane, kFrameDim, -kObjectSpeed, hazard});
    }
  }

  int delta = 0;
  std::vector<Object> kept;
  kept.reserve(objects_.size());
  for (const Object& o : objects_) {
    const bool overlap = o.lane == lane_ && std::abs(o.x - avatar_x_) < kBlockSize;
    if (overlap && o.hazard) {
      hit_hazard_ = true;
      kept.push_back(o);
    } else if (overlap) {
      delta += kRewardPoints;  // consumed on contact
    } else {
      kept.push_back(o);
    }
  }
  objects_ = std::move(kept);
  return delta;
}

void LaneCollectCore::render(Frame& f) const {
  f.px.fill(0);
  for (const Object& o : objects_) {
    const int y0 = kTopOffset + o.lane * kLaneHeight + (kLaneHeight - kBlockSize) / 2;
    f.fill_rect(o.x, y0, kBlockSize, kBlockSize,
                o.hazard ? kHazardIntensity : kRewardIntensity);
  }
  const int ay0 = kTopOffset + lane_ * kLaneHeight + (kLaneHeight - kBlockSize) / 2;
  f.fill_rect(avatar_x_, ay0, kBlockSize, kBlockSize, kAvatarIntensity);
}

GameEnv::GameEnv(const GameSpec& spec, std::uint64_t seed) : spec_(spec) {
  spec_.validate();
  reset(seed);
}

void GameEnv::reset(std::uint64_t seed) {
  rng_ = SplitMix64(seed);
  score_ = 0;
  tick_ = 0;
  step_index_ = 0;
  pause_counter_ = 0;
  terminal_ = false;
  last_effective_ = MotorAction::Noop;
  if (spec_.game == GameId::ChaseDot) {
    core_.emplace<ChaseDotCore>();
    std::get<ChaseDotCore>(core_).reset(seed);
  } else {
    core_.emplace<LaneCollectCore>();
    std::get<LaneCollectCore>(core_).reset(seed);
  }
  render_current();
}

void GameEnv::render_current() {
  if (auto* c = std::get_if<ChaseDotCore>(&core_)) {
    c->render(frame_);
  } else {
    std::get<LaneCollectCore>(core_).render(frame_);
  }
}

MotorMask GameEnv::legal_motor_mask() const {
  if (terminal_) throw std::logic_error("legal_motor_mask on terminal state");
  MotorMask m = full_motor_mask();
  if (pause_counter_ >= spec_.max_consecutive_pauses)
    m[static_cast<int>(MotorAction::Pause)] = false;
  return m;
}

StepResult GameEnv::step(MotorAction action) {
  if (terminal_) throw std::logic_error("step on terminal state");

  if (action == MotorAction::Pause) {
    if (pause_counter_ >= spec_.max_consecutive_pauses)
      throw std::logic_error("pause chosen while masked (max consecutive pauses reached)");
    // World, score and rng stay frozen; the same frame is shown again.
    ++pause_counter_;
    ++step_index_;
    return {frame_, 0, false, true, MotorAction::Pause};
  }

  const MotorAction effective = apply_sticky(last_effective_, action, spec_.sticky_prob, rng_);
  int delta = 0;
  for (int i = 0; i < spec_.frame_skip && !terminal_; ++i) {
    if (auto* c = std::get_if<ChaseDotCore>(&core_)) {
      delta += c->tick(effective);
    } else {
      auto& lc = std::get<LaneCollectCore>(core_);
      delta += lc.tick(effective, rng_);
      if (lc.hit_hazard()) terminal_ = true;
    }
    ++tick_;
    if (tick_ >= spec_.horizon()) terminal_ = true;
  }

  score_ += delta;
  pause_counter_ = 0;
  ++step_index_;
  last_effective_ = effective;
  render_current();
  return {frame_, delta, terminal_, false, effective};
}

const ChaseDotCore& GameEnv::chase_dot() const {
  if (auto* c = std::get_if<ChaseDotCore>(&core_)) return *c;
  throw std::logic_error("chase_dot view requested for a different game");
}

const LaneCollectCore& GameEnv::lane_collect() const {
  if (auto* c = std::get_if<LaneCollectCore>(&core_)) return *c;
  throw std::logic_error("lane_collect view requested for a different game");
}

}  // namespace creyes
