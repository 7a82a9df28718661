#include "creyes/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace creyes {

const char* to_string(MotorAction a) {
  switch (a) {
    case MotorAction::Noop: return "NOOP";
    case MotorAction::Up: return "UP";
    case MotorAction::Down: return "DOWN";
    case MotorAction::Left: return "LEFT";
    case MotorAction::Right: return "RIGHT";
    case MotorAction::Fire: return "FIRE";
    case MotorAction::Pause: return "PAUSE";
  }
  throw std::invalid_argument("unknown motor action");
}

MotorAction motor_action_from_string(const std::string& s) {
  for (int i = 0; i < kMotorActionCount; ++i) {
    MotorAction a = static_cast<MotorAction>(i);
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown motor action name: " + s);
}

void Frame::fill_rect(int x0, int y0, int w, int h, std::uint8_t value) {
  const int xa = std::max(0, x0);
  const int xb = std::min(kFrameDim, x0 + w);
  const int ya = std::max(0, y0);
  const int yb = std::min(kFrameDim, y0 + h);
  for (int y = ya; y < yb; ++y) {
    for (int x = xa; x < xb; ++x) px[y * kFrameDim + x] = value;
  }
}

}  // namespace creyes
