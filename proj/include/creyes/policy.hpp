#pragma once

#include "creyes/core.hpp"
#include "creyes/qnet.hpp"
#include "creyes/rng.hpp"

namespace creyes {

struct AgentAction {
  MotorAction motor = MotorAction::Noop;
  int sensory_cell = 0;
  bool explored = false;
};

// Epsilon-greedy selection over both heads. The rng is consumed in a fixed
// order (gate draw, then motor and sensory draws only when exploring) so
// rollouts replay bit-exactly. Greedy picks take the per-head argmax with
// masked motor entries excluded and ties broken toward the lowest index.
AgentAction select_action(const HeadValues& q, double epsilon, const MotorMask& mask,
                          SplitMix64& rng);

}  // namespace creyes
