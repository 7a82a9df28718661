#pragma once

#include <vector>

#include "creyes/core.hpp"

namespace creyes {

struct FoveaConfig {
  int grid_rows = kGridRows;
  int grid_cols = kGridCols;
  int patch_size = 20;
  int frame_size = kFrameDim;
  int memory_depth = 4;

  int cell_count() const { return grid_rows * grid_cols; }
  void validate() const;  // throws std::invalid_argument
};

struct GazePoint {
  int x = 0;
  int y = 0;
  bool operator==(const GazePoint&) const = default;
};

// Pixel center of a grid cell: round((col + 0.5) * frame / cols) and the row
// analogue. Cell indices are row-major.
GazePoint cell_center(int cell, const FoveaConfig& cfg);

// Square window of normalized intensities around a cell center. origin_* is
// the window's top-left corner in frame coordinates and may be negative;
// pixels outside the frame read as zero.
struct Patch {
  int size = 0;
  int origin_x = 0;
  int origin_y = 0;
  int cell = -1;
  std::vector<float> v;  // size*size, row-major, in [0, 1]

  float at(int px, int py) const { return v[py * size + px]; }
};

Patch extract_patch(const Frame& frame, int cell, const FoveaConfig& cfg);

// One remembered glimpse: a full-frame canvas that is zero everywhere except
// where its patch landed.
struct CanvasLayer {
  std::vector<float> v;  // frame_size^2, row-major
  int cell = -1;         // -1 when the layer has never been written
};

// Persistence-of-vision memory: the newest layer sits at index 0.
struct ObservationCanvas {
  int frame_size = kFrameDim;
  std::vector<CanvasLayer> layers;

  static ObservationCanvas empty(const FoveaConfig& cfg);
};

// In-place variant used on the hot path.
void push_observation(ObservationCanvas& memory, const Patch& patch);

// Pure variant: newest-first shift, oldest layer dropped.
ObservationCanvas update_memory(const ObservationCanvas& memory, const Patch& patch);

struct Observation {
  ObservationCanvas canvas;
  GazePoint gaze;
};

// Extracts the patch for the chosen cell and folds it into memory.
Observation observe(const Frame& frame, int cell, const ObservationCanvas& memory,
                    const FoveaConfig& cfg);

}  // namespace creyes
