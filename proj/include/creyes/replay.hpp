#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "creyes/core.hpp"
#include "creyes/rng.hpp"

namespace creyes {

// One stored experience step. Observations are kept as the network's encoded
// input vector in single precision to bound replay memory.
struct Transition {
  std::vector<float> obs;
  int motor = 0;
  int sensory = 0;
  float reward = 0.0f;
  std::vector<float> next_obs;
  bool done = false;
  MotorMask next_motor_mask = full_motor_mask();
};

// Fixed-capacity ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("train.replay_capacity must be > 0");
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return store_.size(); }

  void push(Transition t) {
    if (store_.size() < capacity_) {
      store_.push_back(std::move(t));
    } else {
      store_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
  }

  const Transition& at(std::size_t i) const { return store_.at(i); }

  std::vector<std::size_t> sample_indices(std::size_t n, SplitMix64& rng) const {
    if (store_.empty()) throw std::logic_error("replay: cannot sample from an empty buffer");
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = static_cast<std::size_t>(rng.next_int(static_cast<int>(store_.size())));
    return out;
  }

 private:
  std::vector<Transition> store_;
  std::size_t capacity_;
  std::size_t next_ = 0;
};

}  // namespace creyes
