#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "creyes/core.hpp"
#include "creyes/episode_log.hpp"

namespace creyes {

// Weighted gaze landing points in frame coordinates. Weights are dwell
// counts and must be positive.
struct Fixation {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

using FixationSet = std::vector<Fixation>;

// All rows of a log contribute their gaze point; identical points merge into
// one fixation with a higher weight.
FixationSet fixations_from_log(const EpisodeLog& log);

// Binary fixation map: pixel = 1 iff it lies within radius_px of any
// fixation (Euclidean, pixel centers on the integer lattice).
std::vector<std::uint8_t> binarize_fixations(const FixationSet& fixations,
                                             double radius_px = 2.0);

// Sum of isotropic Gaussians (one per fixation, scaled by weight), divided by
// its maximum. All zeros when there are no fixations; max exactly 1 otherwise.
std::vector<double> make_saliency(const FixationSet& fixations, double sigma_px = 3.0);

// Agreement integral between a binary map y and a saliency map yhat in
// [0,1]^n: the fraction of pixels where y matches 1(yhat >= t), integrated
// exactly over thresholds t in (0, 1]. 1.0 for a map against itself, 0.5 in
// expectation against noise.
double auc(const std::vector<std::uint8_t>& y, const std::vector<double>& yhat);

// Frame display durations binned at fixed width; everything at or beyond
// last_edge_ms lands in a single tail bin.
struct DurationHistogram {
  double first_edge_ms = 50.0;
  double bin_width_ms = 50.0;
  double last_edge_ms = 500.0;
  std::vector<long> counts;  // regular bins, then the tail bin

  int bin_count() const { return static_cast<int>(counts.size()); }
  long total() const;
  std::vector<double> masses() const;  // throws if total() == 0
  bool same_binning(const DurationHistogram& other) const;

  static DurationHistogram with_edges(double first_edge_ms, double bin_width_ms,
                                      double last_edge_ms);
  void add(double duration_ms);  // throws std::runtime_error below first_edge_ms
};

DurationHistogram frame_duration_histogram(const EpisodeLog& log,
                                           double first_edge_ms = 50.0,
                                           double bin_width_ms = 50.0,
                                           double last_edge_ms = 500.0);

// L1 distance between normalized masses; 0 for identical shapes, 2 for
// disjoint ones. Throws std::invalid_argument on binning mismatch or an
// empty histogram.
double histogram_distance(const DurationHistogram& a, const DurationHistogram& b);

void write_histogram_csv(const DurationHistogram& h, const std::filesystem::path& path);
DurationHistogram read_histogram_csv(const std::filesystem::path& path);

struct ScanpathEntry {
  long step = 0;
  int cell = 0;
  int gaze_x = 0;
  int gaze_y = 0;
  double emma_time_ms = 0.0;
};

// One entry per log row, pauses included (the gaze moves over frozen frames).
std::vector<ScanpathEntry> scanpath(const EpisodeLog& log);

// Levenshtein distance between two cell-index sequences.
int aoi_edit_distance(const std::vector<int>& a, const std::vector<int>& b);

// 8-bit binary PGM (P5). Values are rounded to round(255 * v).
void render_heatmap(const std::vector<double>& map, const std::filesystem::path& path);

// Frame on the left, heatmap on the right, in one 168x84 image.
void render_heatmap_beside(const std::vector<double>& map, const Frame& frame,
                           const std::filesystem::path& path);

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> px;
};

PgmImage read_pgm(const std::filesystem::path& path);

inline constexpr const char* kGazeCsvHeader =
    "frame_id,episode_id,duration_ms,unclipped_reward,action,gaze_positions";

// Human gaze recording: one row per displayed frame, possibly many gaze
// samples per row.
struct GazeFrame {
  long frame_id = 0;
  std::string episode_id;
  double duration_ms = 0.0;
  double unclipped_reward = 0.0;
  std::string action;
  std::vector<std::pair<double, double>> points;
};

struct GazeImportResult {
  std::vector<GazeFrame> frames;
  std::vector<std::pair<int, std::string>> rejected;  // 1-based line number, reason
};

// Header: frame_id,episode_id,duration_ms,unclipped_reward,action,gaze_positions
// where gaze_positions is a ';'-separated list of "x,y" pairs (it is the last
// column, so its embedded commas are unambiguous). Invalid rows are reported,
// not fatal; an unreadable file or bad header throws std::runtime_error.
GazeImportResult import_gaze_log(const std::filesystem::path& path);

FixationSet fixations_from_gaze_frames(const std::vector<GazeFrame>& frames);

}  // namespace creyes
