#include "creyes/policy.hpp"

#include <stdexcept>

namespace creyes {

namespace {

int argmax_legal(const double* q, int n, const bool* legal) {
  int best = -1;
  for (int i = 0; i < n; ++i) {
    if (legal && !legal[i]) continue;
    if (best < 0 || q[i] > q[best]) best = i;
  }
  return best;
}

}  // namespace

AgentAction select_action(const HeadValues& q, double epsilon, const MotorMask& mask,
                          SplitMix64& rng) {
  int legal_count = 0;
  for (bool b : mask) legal_count += b ? 1 : 0;
  if (legal_count == 0)
    throw std::invalid_argument("select_action: no legal motor action");

  AgentAction out;
  if (rng.next_double() < epsilon) {
    out.explored = true;
    int pick = rng.next_int(legal_count);
    for (int i = 0; i < kMotorActionCount; ++i) {
      if (!mask[i]) continue;
      if (pick == 0) {
        out.motor = static_cast<MotorAction>(i);
        break;
      }
      --pick;
    }
    out.sensory_cell = rng.next_int(kSensoryCellCount);
    return out;
  }
  out.motor = static_cast<MotorAction>(
      argmax_legal(q.motor.data(), kMotorActionCount, mask.data()));
  out.sensory_cell = argmax_legal(q.sensory.data(), kSensoryCellCount, nullptr);
  return out;
}

}  // namespace creyes
