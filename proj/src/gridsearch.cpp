#include "creyes/gridsearch.hpp"

#include <algorithm>
#include <stdexcept>

namespace creyes {

namespace {

void prepare_axis(std::vector<double>& values, const char* name) {
  if (values.empty())
    throw std::invalid_argument(std::string("grid_search: empty ") + name + " list");
  for (double v : values)
    if (!(v >= 0.0))
      throw std::invalid_argument(std::string("grid_search: ") + name + " values must be >= 0");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

}  // namespace

GridSearchResult grid_search(std::vector<double> c_pause_values,
                             std::vector<double> c_sacc_values,
                             const DurationHistogram& reference,
                             const CellEvaluator& evaluate) {
  prepare_axis(c_pause_values, "c_pause");
  prepare_axis(c_sacc_values, "c_sacc");
  if (!evaluate) throw std::invalid_argument("grid_search: missing evaluator");

  GridSearchResult result;
  bool have_best = false;
  for (double cp : c_pause_values) {
    for (double cs : c_sacc_values) {
      RewardConfig cfg;
      cfg.pause_penalty = cp;
      cfg.saccade_cost_per_deg = cs;
      GridCellResult cell;
      cell.c_pause = cp;
      cell.c_sacc = cs;
      cell.histogram = evaluate(cfg);
      cell.distance = histogram_distance(cell.histogram, reference);
      if (!have_best || cell.distance < result.best_distance) {
        have_best = true;
        result.best = cfg;
        result.best_distance = cell.distance;
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace creyes
