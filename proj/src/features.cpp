#include "creyes/features.hpp"

#include <stdexcept>

#include "creyes/core.hpp"

namespace creyes {

namespace {

int cell_edge(int index, int frame_size, int cells) {
  return static_cast<int>((static_cast<long>(index) * frame_size) / cells);
}

}  // namespace

std::size_t linear_feature_count(const FoveaConfig& cfg) {
  return static_cast<std::size_t>(cfg.memory_depth) * kSensoryCellCount;
}

std::vector<double> linear_features(const ObservationCanvas& canvas) {
  if (canvas.layers.empty()) throw std::invalid_argument("linear_features: empty canvas");
  const int fs = canvas.frame_size;
  std::vector<double> out;
  out.reserve(canvas.layers.size() * kSensoryCellCount);
  for (const CanvasLayer& layer : canvas.layers) {
    for (int row = 0; row < kGridRows; ++row) {
      const int y0 = cell_edge(row, fs, kGridRows);
      const int y1 = cell_edge(row + 1, fs, kGridRows);
      for (int col = 0; col < kGridCols; ++col) {
        const int x0 = cell_edge(col, fs, kGridCols);
        const int x1 = cell_edge(col + 1, fs, kGridCols);
        double sum = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x)
            sum += layer.v[static_cast<std::size_t>(y) * fs + x];
        const double area = static_cast<double>(y1 - y0) * (x1 - x0);
        out.push_back(sum / area);
      }
    }
  }
  return out;
}

}  // namespace creyes
