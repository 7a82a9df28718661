#include "creyes/fovea.hpp"

#include <cmath>
#include <stdexcept>

namespace creyes {

void FoveaConfig::validate() const {
  if (grid_rows != kGridRows || grid_cols != kGridCols)
    throw std::invalid_argument("fovea grid must be 5x5");
  if (frame_size != kFrameDim) throw std::invalid_argument("fovea.frame_size must be 84");
  // Below ceil(frame/cols) the 25 windows no longer cover the frame jointly.
  const int min_patch = (frame_size + grid_cols - 1) / grid_cols;
  if (patch_size < min_patch)
    throw std::invalid_argument("fovea.patch_size must be >= " + std::to_string(min_patch));
  if (patch_size > frame_size)
    throw std::invalid_argument("fovea.patch_size must be <= " + std::to_string(frame_size));
  if (memory_depth < 1) throw std::invalid_argument("fovea.memory_depth must be >= 1");
}

GazePoint cell_center(int cell, const FoveaConfig& cfg) {
  if (cell < 0 || cell >= cfg.cell_count())
    throw std::invalid_argument("cell index out of range: " + std::to_string(cell));
  const int row = cell / cfg.grid_cols;
  const int col = cell % cfg.grid_cols;
  GazePoint p;
  p.x = static_cast<int>(std::lround((col + 0.5) * cfg.frame_size / cfg.grid_cols));
  p.y = static_cast<int>(std::lround((row + 0.5) * cfg.frame_size / cfg.grid_rows));
  return p;
}

Patch extract_patch(const Frame& frame, int cell, const FoveaConfig& cfg) {
  const GazePoint c = cell_center(cell, cfg);
  Patch p;
  p.size = cfg.patch_size;
  p.origin_x = c.x - cfg.patch_size / 2;
  p.origin_y = c.y - cfg.patch_size / 2;
  p.cell = cell;
  p.v.assign(static_cast<std::size_t>(p.size) * p.size, 0.0f);
  for (int py = 0; py < p.size; ++py) {
    const int fy = p.origin_y + py;
    if (fy < 0 || fy >= kFrameDim) continue;
    for (int px = 0; px < p.size; ++px) {
      const int fx = p.origin_x + px;
      if (fx < 0 || fx >= kFrameDim) continue;
      p.v[py * p.size + px] = static_cast<float>(frame.at(fx, fy)) / 255.0f;
    }
  }
  return p;
}

ObservationCanvas ObservationCanvas::empty(const FoveaConfig& cfg) {
  ObservationCanvas m;
  m.frame_size = cfg.frame_size;
  m.layers.resize(static_cast<std::size_t>(cfg.memory_depth));
  for (CanvasLayer& l : m.layers)
    l.v.assign(static_cast<std::size_t>(cfg.frame_size) * cfg.frame_size, 0.0f);
  return m;
}

void push_observation(ObservationCanvas& memory, const Patch& patch) {
  if (memory.layers.empty()) throw std::invalid_argument("memory has no layers");
  // Recycle the oldest layer's storage as the new front layer.
  CanvasLayer layer = std::move(memory.layers.back());
  memory.layers.pop_back();
  layer.v.assign(static_cast<std::size_t>(memory.frame_size) * memory.frame_size, 0.0f);
  layer.cell = patch.cell;
  for (int py = 0; py < patch.size; ++py) {
    const int fy = patch.origin_y + py;
    if (fy < 0 || fy >= memory.frame_size) continue;
    for (int px = 0; px < patch.size; ++px) {
      const int fx = patch.origin_x + px;
      if (fx < 0 || fx >= memory.frame_size) continue;
      layer.v[fy * memory.frame_size + fx] = patch.at(px, py);
    }
  }
  memory.layers.insert(memory.layers.begin(), std::move(layer));
}

ObservationCanvas update_memory(const ObservationCanvas& memory, const Patch& patch) {
  ObservationCanvas next = memory;
  push_observation(next, patch);
  return next;
}

Observation observe(const Frame& frame, int cell, const ObservationCanvas& memory,
                    const FoveaConfig& cfg) {
  Observation out;
  out.canvas = update_memory(memory, extract_patch(frame, cell, cfg));
  out.gaze = cell_center(cell, cfg);
  return out;
}

}  // namespace creyes
