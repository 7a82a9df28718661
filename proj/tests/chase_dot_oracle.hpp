#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace creyes_test {

// Finite-horizon value iteration for the pursuit game under ideal dynamics:
// the avatar moves one cell per tick on the 5x5 grid, entering the target's
// cell scores one point, and the target respawns uniformly over the other 24
// cells. Computed independently of the game implementation so trained agents
// can be measured against a known optimum.
class ChaseDotOracle {
 public:
  explicit ChaseDotOracle(int horizon) {
    if (horizon < 0) throw std::invalid_argument("oracle horizon must be >= 0");
    std::vector<double> cur(625, 0.0), next(625, 0.0), mean_cur(25, 0.0);
    for (int t = 0; t < horizon; ++t) {
      for (int a = 0; a < 25; ++a) {
        double sum = 0.0;
        for (int g = 0; g < 25; ++g) {
          if (g != a) sum += cur[a * 25 + g];
        }
        mean_cur[a] = sum / 24.0;
      }
      for (int a = 0; a < 25; ++a) {
        for (int g = 0; g < 25; ++g) {
          if (g == a) continue;
          double best = 0.0;
          for (int m = 0; m < 5; ++m) {
            const int a2 = move(a, m);
            const double val = a2 == g ? 1.0 + mean_cur[a2] : cur[a2 * 25 + g];
            best = std::max(best, val);
          }
          next[a * 25 + g] = best;
        }
      }
      std::swap(cur, next);
    }
    v_ = std::move(cur);
  }

  // Expected points to go from a known avatar/target pair.
  double value(int avatar, int target) const {
    if (avatar < 0 || avatar >= 25 || target < 0 || target >= 25 || avatar == target)
      throw std::invalid_argument("oracle state out of range");
    return v_[avatar * 25 + target];
  }

  // Expected points from the center start with a uniformly drawn target.
  double expected_value(int avatar = 12) const {
    double sum = 0.0;
    for (int g = 0; g < 25; ++g) {
      if (g != avatar) sum += v_[avatar * 25 + g];
    }
    return sum / 24.0;
  }

 private:
  static int move(int cell, int m) {
    int row = cell / 5, col = cell % 5;
    switch (m) {
      case 1: row = std::max(row - 1, 0); break;
      case 2: row = std::min(row + 1, 4); break;
      case 3: col = std::max(col - 1, 0); break;
      case 4: col = std::min(col + 1, 4); break;
      default: break;
    }
    return row * 5 + col;
  }

  std::vector<double> v_;
};

}  // namespace creyes_test
