#pragma once

#include <functional>
#include <vector>

#include "creyes/reward.hpp"
#include "creyes/saliency.hpp"

namespace creyes {

struct GridCellResult {
  double c_pause = 0.0;
  double c_sacc = 0.0;
  double distance = 0.0;
  DurationHistogram histogram;
};

struct GridSearchResult {
  RewardConfig best;
  double best_distance = 0.0;
  std::vector<GridCellResult> cells;
};

// Produces the frame-duration histogram a (c_pause, c_sacc) cell induces;
// the production evaluator trains and rolls out, tests may script one.
using CellEvaluator = std::function<DurationHistogram(const RewardConfig&)>;

// Exhaustive scan over the penalty grid, scored by histogram distance to the
// reference. Cells are visited in ascending (c_pause, c_sacc) order and ties
// keep the first winner, so the lexicographically smallest cell prevails.
GridSearchResult grid_search(std::vector<double> c_pause_values,
                             std::vector<double> c_sacc_values,
                             const DurationHistogram& reference,
                             const CellEvaluator& evaluate);

}  // namespace creyes
