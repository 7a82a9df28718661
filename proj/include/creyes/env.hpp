#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "creyes/core.hpp"
#include "creyes/rng.hpp"

namespace creyes {

enum class GameId { ChaseDot, LaneCollect };

const char* to_string(GameId id);
GameId game_id_from_string(const std::string& s);

struct GameSpec {
  GameId game = GameId::ChaseDot;
  int tick_hz = kTickHz;          // fixed at 20; anything else is rejected
  int frame_skip = 1;             // world ticks advanced per non-pause step
  double sticky_prob = 0.25;      // chance the previous effective action repeats
  long max_steps = 0;             // non-pause tick horizon; 0 = per-game default
  int max_consecutive_pauses = 20;

  long horizon() const {
    if (max_steps > 0) return max_steps;
    return game == GameId::ChaseDot ? 200 : 1000;
  }
  void validate() const;  // throws std::invalid_argument naming the bad field
};

struct StepResult {
  Frame frame;
  int score_delta = 0;       // game points, never clipped
  bool terminal = false;
  bool paused = false;
  MotorAction effective_motor = MotorAction::Noop;
};

// Sticky-action filter: returns prev with probability xi, otherwise chosen.
// Exactly one rng draw per call. Pause bypasses the filter so the world can
// never be frozen by luck, only by intent.
MotorAction apply_sticky(MotorAction prev, MotorAction chosen, double xi, SplitMix64& rng);

// 5x5 cell pursuit on a 80x80 playfield centered in the frame. A bright
// avatar chases a dimmer dot whose spawns come from a fixed 31-bit LCG so the
// whole episode is reproducible from the seed alone.
class ChaseDotCore {
 public:
  void reset(std::uint64_t seed);
  int tick(MotorAction a);  // one world tick, returns score delta
  void render(Frame& f) const;

  int avatar_row() const { return avatar_row_; }
  int avatar_col() const { return avatar_col_; }
  int target_row() const { return target_row_; }
  int target_col() const { return target_col_; }
  int avatar_cell() const { return avatar_row_ * 5 + avatar_col_; }
  int target_cell() const { return target_row_ * 5 + target_col_; }
  std::uint32_t lcg_state() const { return lcg_; }

  static constexpr std::uint8_t kAvatarIntensity = 255;
  static constexpr std::uint8_t kTargetIntensity = 128;

 private:
  void respawn_target();

  int avatar_row_ = 2;
  int avatar_col_ = 2;
  int target_row_ = 0;
  int target_col_ = 0;
  std::uint32_t lcg_ = 0;
};

// Five horizontal lanes of drifting objects: bright rewards to touch, dim
// hazards to avoid. Spawns draw from the environment rng stream.
class LaneCollectCore {
 public:
  struct Object {
    int lane = 0;
    int x = 0;    // left edge, may be off-screen
    int dx = 0;   // +2 rightward, -2 leftward
    bool hazard = false;
  };

  void reset(std::uint64_t seed);
  int tick(MotorAction a, SplitMix64& rng);  // returns score delta, may set hit_hazard
  void render(Frame& f) const;

  bool hit_hazard() const { return hit_hazard_; }
  int lane() const { return lane_; }
  int avatar_x() const { return avatar_x_; }
  const std::vector<Object>& objects() const { return objects_; }

  static constexpr std::uint8_t kAvatarIntensity = 255;
  static constexpr std::uint8_t kRewardIntensity = 170;
  static constexpr std::uint8_t kHazardIntensity = 85;
  static constexpr int kLaneCount = 5;
  static constexpr int kLaneHeight = 16;
  static constexpr int kTopOffset = 2;
  static constexpr int kBlockSize = 8;
  static constexpr int kAvatarStepX = 4;
  static constexpr int kObjectSpeed = 2;
  static constexpr double kSpawnProb = 0.05;
  static constexpr int kRewardPoints = 50;

 private:
  int lane_ = 2;
  int avatar_x_ = 38;
  bool hit_hazard_ = false;
  std::vector<Object> objects_;
};

// Seeded, fully deterministic game wrapper: sticky actions, frame skip,
// pause bookkeeping and the non-pause tick horizon all live here.
class GameEnv {
 public:
  GameEnv(const GameSpec& spec, std::uint64_t seed);

  void reset(std::uint64_t seed);
  StepResult step(MotorAction action);  // throws std::logic_error on misuse

  const Frame& frame() const { return frame_; }
  MotorMask legal_motor_mask() const;

  const GameSpec& spec() const { return spec_; }
  long score() const { return score_; }
  long game_tick() const { return tick_; }
  long step_index() const { return step_index_; }
  int pause_counter() const { return pause_counter_; }
  bool terminal() const { return terminal_; }
  MotorAction last_effective() const { return last_effective_; }
  std::uint64_t rng_state() const { return rng_.state(); }

  // Introspection for tests and tools; throws if the other game is active.
  const ChaseDotCore& chase_dot() const;
  const LaneCollectCore& lane_collect() const;

 private:
  void render_current();

  GameSpec spec_;
  std::variant<ChaseDotCore, LaneCollectCore> core_;
  SplitMix64 rng_{0};
  Frame frame_;
  long score_ = 0;
  long tick_ = 0;
  long step_index_ = 0;
  int pause_counter_ = 0;
  bool terminal_ = false;
  MotorAction last_effective_ = MotorAction::Noop;
};

}  // namespace creyes
