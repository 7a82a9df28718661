#include "creyes/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "creyes/io_util.hpp"

namespace creyes {

FixationSet fixations_from_log(const EpisodeLog& log) {
  std::map<std::pair<int, int>, double> dwell;
  for (const EpisodeStep& s : log.steps) dwell[{s.gaze_x, s.gaze_y}] += 1.0;
  FixationSet out;
  out.reserve(dwell.size());
  for (const auto& [pos, weight] : dwell)
    out.push_back({static_cast<double>(pos.first), static_cast<double>(pos.second), weight});
  return out;
}

std::vector<std::uint8_t> binarize_fixations(const FixationSet& fixations, double radius_px) {
  if (radius_px < 0.0) throw std::invalid_argument("fixation radius must be >= 0");
  std::vector<std::uint8_t> map(kFramePixels, 0);
  const double r2 = radius_px * radius_px;
  for (const Fixation& f : fixations) {
    if (f.x < 0.0 || f.x >= kFrameDim || f.y < 0.0 || f.y >= kFrameDim)
      throw std::invalid_argument("fixation outside frame bounds");
    const int x0 = std::max(0, static_cast<int>(std::floor(f.x - radius_px)));
    const int x1 = std::min(kFrameDim - 1, static_cast<int>(std::ceil(f.x + radius_px)));
    const int y0 = std::max(0, static_cast<int>(std::floor(f.y - radius_px)));
    const int y1 = std::min(kFrameDim - 1, static_cast<int>(std::ceil(f.y + radius_px)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - f.x;
        const double dy = y - f.y;
        if (dx * dx + dy * dy <= r2) map[y * kFrameDim + x] = 1;
      }
    }
  }
  return map;
}

std::vector<double> make_saliency(const FixationSet& fixations, double sigma_px) {
  if (!(sigma_px > 0.0)) throw std::invalid_argument("saliency sigma must be > 0");
  std::vector<double> map(kFramePixels, 0.0);
  if (fixations.empty()) return map;
  const double inv = 1.0 / (2.0 * sigma_px * sigma_px);
  for (const Fixation& f : fixations) {
    if (!(f.weight > 0.0)) throw std::invalid_argument("fixation weight must be > 0");
    if (f.x < 0.0 || f.x >= kFrameDim || f.y < 0.0 || f.y >= kFrameDim)
      throw std::invalid_argument("fixation outside frame bounds");
    for (int y = 0; y < kFrameDim; ++y) {
      const double dy = y - f.y;
      for (int x = 0; x < kFrameDim; ++x) {
        const double dx = x - f.x;
        map[y * kFrameDim + x] += f.weight * std::exp(-(dx * dx + dy * dy) * inv);
      }
    }
  }
  const double peak = *std::max_element(map.begin(), map.end());
  for (double& v : map) v /= peak;
  return map;
}

double auc(const std::vector<std::uint8_t>& y, const std::vector<double>& yhat) {
  if (y.empty() || y.size() != yhat.size())
    throw std::invalid_argument("auc: maps must be non-empty and the same size");
  for (std::uint8_t v : y)
    if (v > 1) throw std::invalid_argument("auc: y must be binary");
  for (double v : yhat)
    if (!(v >= 0.0) || v > 1.0) throw std::invalid_argument("auc: yhat must lie in [0, 1]");

  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return yhat[a] > yhat[b]; });

  // The agreement between y and 1(yhat >= t) is piecewise constant between
  // consecutive distinct values of yhat, so the threshold integral over
  // (0, 1] is a finite sum. Boundaries: the distinct positive values plus 1.
  std::vector<double> bounds;
  {
    std::vector<double> vals(yhat);
    std::sort(vals.begin(), vals.end());
    for (double v : vals) {
      if (v <= 0.0) continue;
      if (bounds.empty() || bounds.back() != v) bounds.push_back(v);
    }
    if (bounds.empty() || bounds.back() != 1.0) bounds.push_back(1.0);
  }

  // Sweep thresholds downward. On (lo, hi] the >= set is {yhat >= hi}; when
  // the sweep reaches a boundary, the pixels valued exactly hi flip into the
  // set. Zero-valued pixels never enter because t stays strictly positive.
  long matches = static_cast<long>(std::count(y.begin(), y.end(), std::uint8_t{0}));
  double integral = 0.0;
  std::size_t pix = 0;
  for (std::size_t j = bounds.size(); j-- > 0;) {
    const double hi = bounds[j];
    const double lo = j == 0 ? 0.0 : bounds[j - 1];
    while (pix < n && yhat[order[pix]] >= hi) {
      matches += y[order[pix]] ? 1 : -1;
      ++pix;
    }
    integral += (hi - lo) * (static_cast<double>(matches) / static_cast<double>(n));
  }
  return integral;
}

long DurationHistogram::total() const {
  long t = 0;
  for (long c : counts) t += c;
  return t;
}

std::vector<double> DurationHistogram::masses() const {
  const long t = total();
  if (t == 0) throw std::invalid_argument("histogram is empty");
  std::vector<double> m(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    m[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
  return m;
}

bool DurationHistogram::same_binning(const DurationHistogram& other) const {
  return first_edge_ms == other.first_edge_ms && bin_width_ms == other.bin_width_ms &&
         last_edge_ms == other.last_edge_ms && counts.size() == other.counts.size();
}

DurationHistogram DurationHistogram::with_edges(double first_edge_ms, double bin_width_ms,
                                                double last_edge_ms) {
  if (!(bin_width_ms > 0.0)) throw std::invalid_argument("histogram bin width must be > 0");
  if (!(last_edge_ms > first_edge_ms))
    throw std::invalid_argument("histogram last edge must exceed the first");
  DurationHistogram h;
  h.first_edge_ms = first_edge_ms;
  h.bin_width_ms = bin_width_ms;
  h.last_edge_ms = last_edge_ms;
  const int regular = static_cast<int>(std::lround((last_edge_ms - first_edge_ms) / bin_width_ms));
  if (regular < 1 || std::abs(first_edge_ms + regular * bin_width_ms - last_edge_ms) > 1e-9)
    throw std::invalid_argument("histogram edges must be a whole number of bins apart");
  h.counts.assign(static_cast<std::size_t>(regular) + 1, 0);
  return h;
}

void DurationHistogram::add(double duration_ms) {
  if (duration_ms < first_edge_ms)
    throw std::runtime_error("frame duration below " + format_double(first_edge_ms) +
                             " ms: " + format_double(duration_ms));
  if (duration_ms >= last_edge_ms) {
    ++counts.back();
    return;
  }
  const int idx = static_cast<int>((duration_ms - first_edge_ms) / bin_width_ms);
  ++counts[static_cast<std::size_t>(std::min<int>(idx, bin_count() - 2))];
}

DurationHistogram frame_duration_histogram(const EpisodeLog& log, double first_edge_ms,
                                           double bin_width_ms, double last_edge_ms) {
  DurationHistogram h = DurationHistogram::with_edges(first_edge_ms, bin_width_ms, last_edge_ms);
  for (double d : frame_display_durations(log)) h.add(d);
  return h;
}

double histogram_distance(const DurationHistogram& a, const DurationHistogram& b) {
  if (!a.same_binning(b)) throw std::invalid_argument("histogram binning mismatch");
  const std::vector<double> pa = a.masses();
  const std::vector<double> pb = b.masses();
  double d = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) d += std::abs(pa[i] - pb[i]);
  return d;
}

void write_histogram_csv(const DurationHistogram& h, const std::filesystem::path& path) {
  std::string text = "bin_start_ms,bin_end_ms,count,mass\n";
  const long total = h.total();
  for (int i = 0; i < h.bin_count(); ++i) {
    const double start = h.first_edge_ms + i * h.bin_width_ms;
    const bool tail = i == h.bin_count() - 1;
    text += format_double(tail ? h.last_edge_ms : start);
    text += ',';
    if (!tail) text += format_double(start + h.bin_width_ms);
    text += ',';
    text += std::to_string(h.counts[static_cast<std::size_t>(i)]);
    text += ',';
    const double mass =
        total == 0 ? 0.0
                   : static_cast<double>(h.counts[static_cast<std::size_t>(i)]) / total;
    text += format_double(mass);
    text += '\n';
  }
  write_text_file(path, text);
}

DurationHistogram read_histogram_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != "bin_start_ms,bin_end_ms,count,mass")
    throw std::runtime_error(path.string() + ": missing or malformed histogram header");

  std::vector<double> starts;
  std::vector<long> counts;
  bool saw_tail = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto f = split(lines[i], ',');
    const std::string where = path.string() + ": line " + std::to_string(i + 1);
    if (f.size() != 4) throw std::runtime_error(where + ": expected 4 fields");
    double start = 0.0;
    long long count = 0;
    if (!parse_double(f[0], start)) throw std::runtime_error(where + ": bad bin_start_ms");
    if (!parse_long(f[2], count) || count < 0) throw std::runtime_error(where + ": bad count");
    const bool tail = trim(f[1]).empty();
    if (saw_tail) throw std::runtime_error(where + ": rows after the tail bin");
    saw_tail = tail;
    starts.push_back(start);
    counts.push_back(static_cast<long>(count));
  }
  if (starts.size() < 2 || !saw_tail)
    throw std::runtime_error(path.string() + ": histogram needs regular bins and a tail bin");

  const double first = starts[0];
  const double width = starts[1] - starts[0];
  const double last = starts.back();
  DurationHistogram h = DurationHistogram::with_edges(first, width, last);
  if (h.counts.size() != counts.size())
    throw std::runtime_error(path.string() + ": inconsistent bin edges");
  h.counts = counts;  // masses are recomputed from counts, never trusted
  return h;
}

std::vector<ScanpathEntry> scanpath(const EpisodeLog& log) {
  std::vector<ScanpathEntry> out;
  out.reserve(log.steps.size());
  for (const EpisodeStep& s : log.steps)
    out.push_back({s.step, s.sensory_cell, s.gaze_x, s.gaze_y, s.emma_time_ms});
  return out;
}

int aoi_edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<int> prev(m + 1);
  std::vector<int> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace {

void write_pgm_bytes(const std::vector<std::uint8_t>& px, int width, int height,
                     const std::filesystem::path& path) {
  std::string text = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  text.append(reinterpret_cast<const char*>(px.data()), px.size());
  write_text_file(path, text);
}

std::vector<std::uint8_t> quantize_map(const std::vector<double>& map) {
  if (map.size() != static_cast<std::size_t>(kFramePixels))
    throw std::invalid_argument("heatmap must be 84x84");
  std::vector<std::uint8_t> px(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!(map[i] >= 0.0) || map[i] > 1.0)
      throw std::invalid_argument("heatmap values must lie in [0, 1]");
    px[i] = static_cast<std::uint8_t>(std::lround(255.0 * map[i]));
  }
  return px;
}

}  // namespace

void render_heatmap(const std::vector<double>& map, const std::filesystem::path& path) {
  write_pgm_bytes(quantize_map(map), kFrameDim, kFrameDim, path);
}

void render_heatmap_beside(const std::vector<double>& map, const Frame& frame,
                           const std::filesystem::path& path) {
  const std::vector<std::uint8_t> right = quantize_map(map);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(kFrameDim) * kFrameDim * 2);
  for (int y = 0; y < kFrameDim; ++y) {
    for (int x = 0; x < kFrameDim; ++x) {
      px[y * 2 * kFrameDim + x] = frame.at(x, y);
      px[y * 2 * kFrameDim + kFrameDim + x] = right[y * kFrameDim + x];
    }
  }
  write_pgm_bytes(px, 2 * kFrameDim, kFrameDim, path);
}

PgmImage read_pgm(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  PgmImage img;
  int maxval = 0;
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t' ||
                                 text[pos] == '\r'))
      ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '\n' && text[pos] != '\t' &&
           text[pos] != '\r')
      ++pos;
    return text.substr(start, pos - start);
  };
  if (next_token() != "P5") throw std::runtime_error(path.string() + ": not a P5 PGM");
  long long w = 0, h = 0, mv = 0;
  if (!parse_long(next_token(), w) || !parse_long(next_token(), h) ||
      !parse_long(next_token(), mv))
    throw std::runtime_error(path.string() + ": malformed PGM header");
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  maxval = static_cast<int>(mv);
  if (maxval != 255) throw std::runtime_error(path.string() + ": maxval must be 255");
  ++pos;  // single whitespace after maxval
  const std::size_t need = static_cast<std::size_t>(img.width) * img.height;
  if (text.size() - pos < need) throw std::runtime_error(path.string() + ": truncated PGM");
  img.px.assign(text.begin() + static_cast<long>(pos),
                text.begin() + static_cast<long>(pos + need));
  return img;
}

GazeImportResult import_gaze_log(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || trim(lines[0]) != kGazeCsvHeader)
    throw std::runtime_error(path.string() + ": missing or malformed gaze header");

  GazeImportResult out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    const std::string& line = lines[i];
    if (trim(line).empty()) continue;

    // gaze_positions is the final column and may itself contain commas, so
    // only the first five separators are column breaks.
    std::vector<std::string> f;
    std::size_t start = 0;
    for (int col = 0; col < 5; ++col) {
      const std::size_t p = line.find(',', start);
      if (p == std::string::npos) break;
      f.emplace_back(line.substr(start, p - start));
      start = p + 1;
    }
    if (f.size() != 5) {
      out.rejected.emplace_back(line_no, "expected 6 columns");
      continue;
    }
    std::string positions = line.substr(start);
    if (positions.size() >= 2 && positions.front() == '"' && positions.back() == '"')
      positions = positions.substr(1, positions.size() - 2);

    GazeFrame g;
    long long v = 0;
    if (!parse_long(f[0], v)) {
      out.rejected.emplace_back(line_no, "bad frame_id");
      continue;
    }
    g.frame_id = static_cast<long>(v);
    g.episode_id = std::string(trim(f[1]));
    if (g.episode_id.empty()) {
      out.rejected.emplace_back(line_no, "empty episode_id");
      continue;
    }
    if (!parse_double(f[2], g.duration_ms) || g.duration_ms < 50.0) {
      out.rejected.emplace_back(line_no, "bad duration_ms (must be a number >= 50)");
      continue;
    }
    if (!parse_double(f[3], g.unclipped_reward)) {
      out.rejected.emplace_back(line_no, "bad unclipped_reward");
      continue;
    }
    g.action = std::string(trim(f[4]));

    bool ok = true;
    if (!trim(positions).empty()) {
      for (const std::string& pair : split(positions, ';')) {
        const auto xy = split(pair, ',');
        double x = 0.0, y = 0.0;
        if (xy.size() != 2 || !parse_double(xy[0], x) || !parse_double(xy[1], y)) {
          out.rejected.emplace_back(line_no, "malformed gaze position '" + pair + "'");
          ok = false;
          break;
        }
        if (x < 0.0 || x >= kFrameDim || y < 0.0 || y >= kFrameDim) {
          out.rejected.emplace_back(line_no, "gaze position out of frame bounds");
          ok = false;
          break;
        }
        g.points.emplace_back(x, y);
      }
    }
    if (ok) out.frames.push_back(std::move(g));
  }
  return out;
}

FixationSet fixations_from_gaze_frames(const std::vector<GazeFrame>& frames) {
  std::map<std::pair<double, double>, double> dwell;
  for (const GazeFrame& g : frames)
    for (const auto& [x, y] : g.points) dwell[{x, y}] += 1.0;
  FixationSet out;
  out.reserve(dwell.size());
  for (const auto& [pos, weight] : dwell) out.push_back({pos.first, pos.second, weight});
  return out;
}

}  // namespace creyes
