#include "creyes/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "creyes/config.hpp"
#include "creyes/gridsearch.hpp"
#include "creyes/io_util.hpp"
#include "creyes/loop.hpp"
#include "creyes/qnet.hpp"
#include "creyes/saliency.hpp"
#include "creyes/trainer.hpp"

namespace creyes {

namespace {

// Seed streams that keep the rng consumers of different commands apart.
constexpr std::uint64_t kRolloutStreamBase = 2000000;
constexpr std::uint64_t kRandomBaselineStream = 777;

std::string episode_file_name(long index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "episode_%03ld.csv", index);
  return buf;
}

void ensure_out_dir(const std::filesystem::path& dir) {
  if (dir.empty()) throw std::invalid_argument("--out directory is required");
  std::filesystem::create_directories(dir);
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::optional<std::uint64_t>& seed) {
  ExperimentConfig cfg = ExperimentConfig::from_file(path);
  if (seed) cfg.train.seed = *seed;
  return cfg;
}

FixationSet merge_fixation_sets(const std::vector<FixationSet>& sets) {
  std::map<std::pair<double, double>, double> acc;
  for (const FixationSet& s : sets)
    for (const Fixation& f : s) acc[{f.x, f.y}] += f.weight;
  FixationSet out;
  out.reserve(acc.size());
  for (const auto& [pt, w] : acc) out.push_back({pt.first, pt.second, w});
  return out;
}

// A reference recording: either a rolled-out episode log or an imported
// human gaze file. Rows are the unit the truncation flag cuts on.
struct ReferenceEpisode {
  bool is_gaze = false;
  EpisodeLog log;
  std::vector<GazeFrame> frames;

  std::size_t rows() const { return is_gaze ? frames.size() : log.steps.size(); }

  void truncate(std::size_t n) {
    if (is_gaze) {
      if (frames.size() > n) frames.resize(n);
      return;
    }
    if (log.steps.size() > n) {
      log.steps.resize(n);
      for (EpisodeStep& s : log.steps) s.frame_duration_ms.reset();
      log.finalize_frame_durations();
    }
  }

  FixationSet fixations() const {
    return is_gaze ? fixations_from_gaze_frames(frames) : fixations_from_log(log);
  }

  std::vector<double> durations() const {
    if (!is_gaze) return frame_display_durations(log);
    std::vector<double> out;
    out.reserve(frames.size());
    for (const GazeFrame& f : frames) out.push_back(f.duration_ms);
    return out;
  }
};

std::vector<ReferenceEpisode> load_references(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<ReferenceEpisode> out;
  std::string failures;
  for (const std::filesystem::path& p : paths) {
    try {
      const std::vector<std::string> lines = read_lines(p);
      if (!lines.empty() && trim(lines[0]) == kGazeCsvHeader) {
        const GazeImportResult imported = import_gaze_log(p);
        // Split the flat frame list into per-episode recordings so the
        // truncation rule can cut each one independently.
        std::map<std::string, std::size_t> order;
        std::vector<std::vector<GazeFrame>> groups;
        for (const GazeFrame& f : imported.frames) {
          auto [it, inserted] = order.try_emplace(f.episode_id, groups.size());
          if (inserted) groups.emplace_back();
          groups[it->second].push_back(f);
        }
        for (std::vector<GazeFrame>& g : groups) {
          ReferenceEpisode e;
          e.is_gaze = true;
          e.frames = std::move(g);
          out.push_back(std::move(e));
        }
      } else {
        ReferenceEpisode ref;
        ref.log = read_episode_csv(p);
        out.push_back(std::move(ref));
      }
    } catch (const std::exception& e) {
      if (!failures.empty()) failures += "; ";
      failures += e.what();
    }
  }
  if (!failures.empty())
    throw std::runtime_error("eval: unreadable reference logs: " + failures);
  return out;
}

double mean_auc_vs_random(const std::vector<std::uint8_t>& y, std::uint64_t seed,
                          int trials) {
  SplitMix64 rng(seed);
  double sum = 0.0;
  std::vector<double> map(y.size());
  for (int t = 0; t < trials; ++t) {
    for (double& v : map) v = rng.next_double();
    sum += auc(y, map);
  }
  return sum / trials;
}

}  // namespace

int cmd_train(const TrainOptions& opt) {
  const ExperimentConfig cfg = load_config(opt.config, opt.seed);
  ensure_out_dir(opt.out_dir);
  write_text_file(opt.out_dir / "config.cfg", cfg.to_text());

  QNetwork net(cfg.net_spec());
  const TrainResult result = train(net, cfg.loop_config(true), cfg.train);
  net.save((opt.out_dir / "checkpoint.bin").string());
  write_metrics_csv(result.metrics, opt.out_dir / "metrics.csv");
  return 0;
}

int cmd_rollout(const RolloutOptions& opt) {
  const ExperimentConfig cfg = load_config(opt.config, opt.seed);
  QNetwork net = QNetwork::load(opt.checkpoint.string());
  if (!(net.spec() == cfg.net_spec()))
    throw std::invalid_argument(
        "rollout: checkpoint network spec does not match the config (" +
        to_string(net.spec().variant) + " depth " + std::to_string(net.spec().memory_depth) +
        " vs " + to_string(cfg.net_spec().variant) + " depth " +
        std::to_string(cfg.net_spec().memory_depth) + ")");
  const long episodes = opt.episodes.value_or(cfg.eval_episodes);
  if (episodes < 0) throw std::invalid_argument("--episodes must be >= 0");

  ensure_out_dir(opt.out_dir);
  write_text_file(opt.out_dir / "config.cfg", cfg.to_text());
  const LoopConfig loop_cfg = cfg.loop_config(opt.pausing);
  for (long i = 0; i < episodes; ++i) {
    const EpisodeLog log =
        run_episode(loop_cfg, net, cfg.eval_epsilon,
                    mix_seed(cfg.train.seed, kRolloutStreamBase + static_cast<std::uint64_t>(i)));
    write_episode_csv(log, opt.out_dir / episode_file_name(i));
  }
  return 0;
}

int cmd_eval(const EvalOptions& opt) {
  if (opt.logs.empty()) throw std::invalid_argument("eval: at least one log is required");
  ExperimentConfig cfg;
  if (opt.config) cfg = ExperimentConfig::from_file(*opt.config);
  if (opt.seed) cfg.train.seed = *opt.seed;

  std::vector<EpisodeLog> logs;
  std::string failures;
  for (const std::filesystem::path& p : opt.logs) {
    try {
      logs.push_back(read_episode_csv(p));
    } catch (const std::exception& e) {
      if (!failures.empty()) failures += "; ";
      failures += e.what();
    }
  }
  if (!failures.empty()) throw std::runtime_error("eval: unreadable logs: " + failures);

  ensure_out_dir(opt.out_dir);
  write_text_file(opt.out_dir / "config.cfg", cfg.to_text());

  DurationHistogram hist =
      DurationHistogram::with_edges(50.0, 50.0, cfg.histogram_last_edge_ms);
  for (const EpisodeLog& log : logs)
    for (double d : frame_display_durations(log)) hist.add(d);
  write_histogram_csv(hist, opt.out_dir / "duration_histogram.csv");

  std::vector<FixationSet> per_log;
  per_log.reserve(logs.size());
  for (const EpisodeLog& log : logs) per_log.push_back(fixations_from_log(log));
  const FixationSet agent_fixations = merge_fixation_sets(per_log);
  const std::vector<double> agent_saliency =
      make_saliency(agent_fixations, cfg.saliency_sigma_px);
  render_heatmap(agent_saliency, opt.out_dir / "saliency_agent.pgm");

  std::string scanpath_csv = "episode,step,cell,gaze_x,gaze_y,emma_time_ms\n";
  for (std::size_t e = 0; e < logs.size(); ++e) {
    for (const ScanpathEntry& s : scanpath(logs[e])) {
      scanpath_csv += std::to_string(e);
      scanpath_csv += ',';
      scanpath_csv += std::to_string(s.step);
      scanpath_csv += ',';
      scanpath_csv += std::to_string(s.cell);
      scanpath_csv += ',';
      scanpath_csv += std::to_string(s.gaze_x);
      scanpath_csv += ',';
      scanpath_csv += std::to_string(s.gaze_y);
      scanpath_csv += ',';
      scanpath_csv += format_double(s.emma_time_ms);
      scanpath_csv += '\n';
    }
  }
  write_text_file(opt.out_dir / "scanpath.csv", scanpath_csv);

  long total_steps = 0;
  long pause_steps = 0;
  long max_score = 0;
  double score_sum = 0.0;
  for (const EpisodeLog& log : logs) {
    total_steps += static_cast<long>(log.steps.size());
    for (const EpisodeStep& s : log.steps) pause_steps += s.paused ? 1 : 0;
    max_score = std::max(max_score, log.final_score());
    score_sum += static_cast<double>(log.final_score());
  }
  std::string summary;
  summary += "episodes = " + std::to_string(logs.size()) + "\n";
  summary += "total_steps = " + std::to_string(total_steps) + "\n";
  summary += "pause_steps = " + std::to_string(pause_steps) + "\n";
  summary += "mean_score = " + format_double(score_sum / static_cast<double>(logs.size())) + "\n";
  summary += "max_score = " + std::to_string(max_score) + "\n";
  write_text_file(opt.out_dir / "summary.txt", summary);

  if (opt.references.empty()) return 0;

  std::vector<ReferenceEpisode> refs = load_references(opt.references);
  if (opt.truncate_reference) {
    double mean_rows = 0.0;
    for (const EpisodeLog& log : logs) mean_rows += static_cast<double>(log.steps.size());
    mean_rows /= static_cast<double>(logs.size());
    const auto cut = static_cast<std::size_t>(std::llround(mean_rows));
    for (ReferenceEpisode& r : refs) r.truncate(cut);
  }

  DurationHistogram ref_hist =
      DurationHistogram::with_edges(50.0, 50.0, cfg.histogram_last_edge_ms);
  std::vector<FixationSet> ref_sets;
  ref_sets.reserve(refs.size());
  for (const ReferenceEpisode& r : refs) {
    for (double d : r.durations()) ref_hist.add(d);
    ref_sets.push_back(r.fixations());
  }
  write_histogram_csv(ref_hist, opt.out_dir / "duration_histogram_reference.csv");
  const FixationSet ref_fixations = merge_fixation_sets(ref_sets);
  render_heatmap(make_saliency(ref_fixations, cfg.saliency_sigma_px),
                 opt.out_dir / "saliency_reference.pgm");

  const std::vector<std::uint8_t> ref_binary =
      binarize_fixations(ref_fixations, cfg.saliency_fixation_radius_px);
  const std::vector<std::uint8_t> agent_binary =
      binarize_fixations(agent_fixations, cfg.saliency_fixation_radius_px);
  std::vector<double> agent_binary_map(agent_binary.begin(), agent_binary.end());

  std::string report = "metric,value\n";
  report += "reference_vs_agent_fixations,";
  report += format_double(auc(ref_binary, agent_binary_map));
  report += '\n';
  report += "reference_vs_agent_saliency,";
  report += format_double(auc(ref_binary, agent_saliency));
  report += '\n';
  report += "random_baseline,";
  report += format_double(
      mean_auc_vs_random(ref_binary, mix_seed(cfg.train.seed, kRandomBaselineStream), 100));
  report += '\n';
  write_text_file(opt.out_dir / "auc_report.csv", report);
  return 0;
}

int cmd_grid_search(const GridSearchOptions& opt) {
  const ExperimentConfig cfg = load_config(opt.config, opt.seed);
  const GridAxes axes = parse_grid_file(opt.grid);
  const DurationHistogram reference = read_histogram_csv(opt.reference_histogram);

  ensure_out_dir(opt.out_dir);
  write_text_file(opt.out_dir / "config.cfg", cfg.to_text());

  const CellEvaluator evaluate = [&cfg](const RewardConfig& cell) {
    ExperimentConfig c = cfg;
    c.reward.pause_penalty = cell.pause_penalty;
    c.reward.saccade_cost_per_deg = cell.saccade_cost_per_deg;
    QNetwork net(c.net_spec());
    train(net, c.loop_config(true), c.train);
    DurationHistogram hist =
        DurationHistogram::with_edges(50.0, 50.0, c.histogram_last_edge_ms);
    const LoopConfig loop_cfg = c.loop_config(true);
    for (int i = 0; i < c.eval_episodes; ++i) {
      const EpisodeLog log = run_episode(
          loop_cfg, net, c.eval_epsilon,
          mix_seed(c.train.seed, kRolloutStreamBase + static_cast<std::uint64_t>(i)));
      for (double d : frame_display_durations(log)) hist.add(d);
    }
    return hist;
  };

  const GridSearchResult result =
      grid_search(axes.c_pause, axes.c_sacc, reference, evaluate);

  std::string report = "c_pause,c_sacc,distance\n";
  for (const GridCellResult& cell : result.cells) {
    report += format_double(cell.c_pause);
    report += ',';
    report += format_double(cell.c_sacc);
    report += ',';
    report += format_double(cell.distance);
    report += '\n';
  }
  write_text_file(opt.out_dir / "grid_report.csv", report);

  ExperimentConfig best = cfg;
  best.reward.pause_penalty = result.best.pause_penalty;
  best.reward.saccade_cost_per_deg = result.best.saccade_cost_per_deg;
  write_text_file(opt.out_dir / "best_config.cfg", best.to_text());
  return 0;
}

int cmd_import_gaze(const ImportGazeOptions& opt) {
  const GazeImportResult imported = import_gaze_log(opt.input);
  if (imported.frames.empty())
    throw std::runtime_error("import: no valid rows in " + opt.input.string() + " (" +
                             std::to_string(imported.rejected.size()) + " rejected)");

  ensure_out_dir(opt.out_dir);
  std::string csv = std::string(kGazeCsvHeader) + "\n";
  for (const GazeFrame& f : imported.frames) {
    csv += std::to_string(f.frame_id);
    csv += ',';
    csv += f.episode_id;
    csv += ',';
    csv += format_double(f.duration_ms);
    csv += ',';
    csv += format_double(f.unclipped_reward);
    csv += ',';
    csv += f.action;
    csv += ',';
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (i) csv += ';';
      csv += format_double(f.points[i].first);
      csv += ',';
      csv += format_double(f.points[i].second);
    }
    csv += '\n';
  }
  write_text_file(opt.out_dir / "imported_gaze.csv", csv);

  std::string report;
  report += "rows_imported = " + std::to_string(imported.frames.size()) + "\n";
  report += "rows_rejected = " + std::to_string(imported.rejected.size()) + "\n";
  for (const auto& [line, reason] : imported.rejected)
    report += "line " + std::to_string(line) + ": " + reason + "\n";
  write_text_file(opt.out_dir / "import_report.txt", report);
  return 0;
}

}  // namespace creyes
