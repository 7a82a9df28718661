#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace creyes {

inline constexpr int kFrameDim = 84;
inline constexpr int kFramePixels = kFrameDim * kFrameDim;
inline constexpr int kTickHz = 20;
inline constexpr double kTickMs = 1000.0 / kTickHz;
inline constexpr int kMotorActionCount = 7;
inline constexpr int kGridRows = 5;
inline constexpr int kGridCols = 5;
inline constexpr int kSensoryCellCount = kGridRows * kGridCols;

// Motor command. Pause freezes the game world for one agent step; it is the
// last index so a Q-head can mask it off cheaply.
enum class MotorAction : int { Noop = 0, Up, Down, Left, Right, Fire, Pause };

const char* to_string(MotorAction a);
MotorAction motor_action_from_string(const std::string& s);

// 84x84 grayscale screen, row-major, origin at the top-left corner.
// at(x, y) addresses column x, row y.
struct Frame {
  std::array<std::uint8_t, kFramePixels> px{};

  std::uint8_t& at(int x, int y) { return px[y * kFrameDim + x]; }
  std::uint8_t at(int x, int y) const { return px[y * kFrameDim + x]; }

  // Fills the intersection of [x0, x0+w) x [y0, y0+h) with the frame.
  void fill_rect(int x0, int y0, int w, int h, std::uint8_t value);

  bool operator==(const Frame&) const = default;
};

using MotorMask = std::array<bool, kMotorActionCount>;

inline MotorMask full_motor_mask() {
  MotorMask m;
  m.fill(true);
  return m;
}

}  // namespace creyes
