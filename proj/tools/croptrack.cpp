// croptrack command-line front end: scene synthesis, tracking, window-size sweeps and curve analysis.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "croptrack/config.hpp"
#include "croptrack/csv.hpp"
#include "croptrack/fitting.hpp"
#include "croptrack/scene_io.hpp"
#include "croptrack/serialize.hpp"
#include "croptrack/sweep.hpp"
#include "croptrack/synth.hpp"
#include "croptrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace croptrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

/// Raised for bad arguments discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string preset_names() {
  std::string names;
  for (const auto& s : standard_objects()) names += (names.empty() ? "" : ", ") + s.name;
  return names;
}

SceneSpec find_preset(const std::string& name) {
  for (const auto& s : standard_objects()) {
    if (s.name == name) return s;
  }
  throw UsageError(fmt::format("unknown preset '{}'; valid presets: {}", name, preset_names()));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot create {}", path.string()));
  out << text;
}

/// Flags shared by track and sweep.
struct TrackerFlags {
  std::string config_file;
  std::optional<double> threshold;
  std::optional<int> median_radius;
  std::optional<int> max_init_frames;
  bool no_timing = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config_file, "key = value tracker settings (flags override)")->check(CLI::ExistingFile);
    cmd.add_option("--threshold", threshold, "red-difference threshold (default 0.25)")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--median-radius", median_radius, "median filter radius (default 1)")->check(CLI::PositiveNumber);
    cmd.add_option("--max-init-frames", max_init_frames, "frames searched for the initial detection")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--no-timing", no_timing, "record zero wall-clock time so outputs are reproducible");
  }

  [[nodiscard]] TrackerConfig resolve() const {
    TrackerConfig cfg;
    if (!config_file.empty()) apply_tracker_config(read_key_values(config_file), cfg);
    if (threshold) cfg.detect_threshold = *threshold;
    if (median_radius) cfg.median_radius = *median_radius;
    if (max_init_frames) cfg.max_init_frames = *max_init_frames;
    cfg.measure_time = !no_timing;
    return cfg;
  }
};

struct SynthArgs {
  std::string preset;
  std::string spec_file;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> frames;
};

int run_synth(const SynthArgs& a) {
  if (a.preset.empty() == a.spec_file.empty()) throw UsageError("synth: give exactly one of --preset or --spec");
  SceneSpec spec;
  if (!a.preset.empty()) {
    spec = find_preset(a.preset);
  } else {
    apply_scene_config(read_key_values(a.spec_file), spec);
  }
  if (a.seed) spec.seed = *a.seed;
  if (a.frames) spec.n_frames = *a.frames;

  const auto scene = generate_scene(spec);
  write_scene(a.out, scene);
  write_text(fs::path(a.out) / "scene.txt", format_scene_config(spec));
  fmt::print("wrote {} frames of '{}' to {}\n", scene.frames.size(), spec.name, a.out);
  return kExitOk;
}

struct TrackArgs {
  std::string scene_dir;
  std::optional<double> window_multiple;
  bool full_frame = false;
  std::string out;
  TrackerFlags flags;
};

int run_track(const TrackArgs& a) {
  TrackerConfig cfg = a.flags.resolve();
  if (a.window_multiple) cfg.window_multiple = *a.window_multiple;
  cfg.full_frame = a.full_frame || cfg.full_frame;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto scene = read_scene(a.scene_dir);
  std::optional<std::span<const Point2>> truth;
  if (!scene.truth.empty()) truth = std::span<const Point2>(scene.truth);
  const auto result = track_video(scene.frames, cfg, truth);

  const fs::path out = a.out.empty() ? fs::path(a.scene_dir) / "track" : fs::path(a.out);
  fs::create_directories(out);
  write_text(out / "track.json", to_json(result).dump(2) + "\n");
  {
    std::ofstream csv(out / "track.csv", std::ios::binary);
    write_track_csv(csv, result);
  }

  const double mean_pixels =
      result.records.empty() ? 0.0 : static_cast<double>(result.total_pixels) / static_cast<double>(result.records.size());
  std::string summary = fmt::format("frames={} window_side={} success_rate={}", result.records.size(),
                                    result.window_side, fmt_num(result.success_rate));
  if (result.mean_distance_error) summary += fmt::format(" mean_error={}", fmt_num(*result.mean_distance_error));
  summary += fmt::format(" mean_pixels={} mean_elapsed_s={}", fmt_num(mean_pixels), fmt_num(result.mean_elapsed));
  fmt::print("{}\n", summary);
  return kExitOk;
}

struct SweepArgs {
  std::vector<std::string> presets;
  std::vector<std::string> scene_dirs;
  std::vector<double> multiples;
  int trials = 5;
  std::optional<std::size_t> frames;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out = "sweep_out";
  double range_lo = 0.0;
  double range_hi = 10.0;
  TrackerFlags flags;
};

void print_optimum(const SweepReport& report) {
  const auto& pooled = report.pooled;
  if (pooled.intersection) {
    fmt::print("optimum (intersection): x* = {}  F(x*) = {}\n", fmt_num(pooled.intersection->x),
               fmt_num(pooled.intersection->value));
  } else {
    fmt::print("optimum (intersection): none ({})\n", pooled.note.empty() ? "no crossing" : pooled.note);
  }
  if (pooled.argmin) {
    fmt::print("optimum (argmin F+G):   x^ = {}  F+G = {}\n", fmt_num(pooled.argmin->x), fmt_num(pooled.argmin->value));
  }
}

int run_sweep_cmd(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.tracker = a.flags.resolve();
  cfg.trials = a.trials;
  cfg.multiples = a.multiples;
  cfg.threads = a.threads;
  cfg.analysis.range_lo = a.range_lo;
  cfg.analysis.range_hi = a.range_hi;
  if (!(a.range_lo < a.range_hi)) throw UsageError("sweep: --range needs lo < hi");

  std::vector<SweepObject> objects;
  auto presets = a.presets;
  if (presets.empty() && a.scene_dirs.empty()) {
    for (const auto& s : standard_objects()) presets.push_back(s.name);
  }
  for (const auto& name : presets) {
    SceneSpec spec = find_preset(name);
    if (a.frames) spec.n_frames = *a.frames;
    if (a.seed) spec.seed = *a.seed;
    objects.push_back(SweepObject::from_spec(spec));
  }
  for (const auto& dir : a.scene_dirs) {
    auto scene = read_scene(dir);
    if (scene.truth.empty()) throw std::runtime_error(fmt::format("{}: sweep needs truth.csv", dir));
    objects.push_back(SweepObject::from_scene(fs::path(dir).filename().string(), std::move(scene)));
  }

  const auto report = sweep(objects, cfg);
  write_sweep_outputs(a.out, report, cfg.analysis);

  std::size_t ok = 0;
  std::size_t total = 0;
  for (const auto& obj : report.objects) {
    for (const auto& p : obj.points) {
      ok += static_cast<std::size_t>(p.trials_ok);
      total += static_cast<std::size_t>(p.trials_ok + p.trials_failed);
    }
  }
  fmt::print("swept {} object(s), {} of {} cells succeeded; outputs in {}\n", report.objects.size(), ok, total, a.out);
  print_optimum(report);
  return ok == 0 ? kExitRuntime : kExitOk;
}

struct ReportArgs {
  std::string dir;
  std::string out;
  double range_lo = 0.0;
  double range_hi = 10.0;
};

int run_report(const ReportArgs& a) {
  AnalysisConfig cfg;
  cfg.range_lo = a.range_lo;
  cfg.range_hi = a.range_hi;
  if (!(a.range_lo < a.range_hi)) throw UsageError("report: --range needs lo < hi");
  const fs::path dir(a.dir);
  auto objects = read_sweep_csv(dir / "sweep.csv", dir / "full_frame.csv");
  const auto report = analyze(std::move(objects), cfg);
  const fs::path out = a.out.empty() ? dir : fs::path(a.out);
  write_sweep_outputs(out, report, cfg);
  print_optimum(report);
  return kExitOk;
}

struct FitArgs {
  std::string csv;
  std::string model = "poly5";
  std::string x_col;
  std::string y_col;
  std::string out;
};

int run_fit(const FitArgs& a) {
  const auto table = read_csv(a.csv);
  if (table.header.size() < 2 && (a.x_col.empty() || a.y_col.empty())) {
    throw std::runtime_error("fit: CSV needs at least two columns");
  }
  const std::size_t xi = a.x_col.empty() ? 0 : table.column(a.x_col);
  const std::size_t yi = a.y_col.empty() ? 1 : table.column(a.y_col);
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    xs.push_back(parse_double(row[xi], table.header[xi]));
    ys.push_back(parse_double(row[yi], table.header[yi]));
  }

  nlohmann::json j;
  if (a.model == "exp") {
    const auto m = expfit(xs, ys);
    j = to_json(m);
    j["model"] = "exp";
    j["rms"] = sig6(rms_residual(m, xs, ys));
  } else {
    const int degree = std::stoi(a.model.substr(4));
    const auto m = polyfit(xs, ys, degree);
    j = to_json(m);
    j["model"] = a.model;
    j["rms"] = sig6(rms_residual(m, xs, ys));
  }
  j["points"] = xs.size();
  const auto text = j.dump(2) + "\n";
  if (a.out.empty()) {
    fmt::print("{}", text);
  } else {
    write_text(a.out, text);
  }
  return kExitOk;
}

struct OptimumArgs {
  std::vector<double> poly;
  std::vector<double> exp;
  std::vector<double> range{0.0, 10.0};
  double step = 1e-3;
};

int run_optimum(const OptimumArgs& a) {
  if (!(a.range[0] < a.range[1])) throw UsageError("optimum: --range needs lo < hi");
  const PolyModel f{a.poly};
  const ExpModel g{a.exp[0], a.exp[1]};
  const auto hit = find_intersection(f, g, a.range[0], a.range[1]);
  const auto best = argmin_sum(f, g, a.range[0], a.range[1], a.step);
  if (hit) {
    fmt::print("intersection x* = {}  F(x*) = {}  G(x*) = {}\n", fmt_num(hit->x), fmt_num(hit->value),
               fmt_num(eval_exp(g, hit->x)));
  } else {
    fmt::print("no intersection in [{}, {}]\n", fmt_num(a.range[0]), fmt_num(a.range[1]));
  }
  fmt::print("argmin F+G x^ = {}  F+G = {}\n", fmt_num(best.x), fmt_num(best.value));
  return hit ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crop-window Kalman object tracking: synthesis, tracking, sweeps and curve analysis"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene as PPM frames plus truth.csv");
  synth->add_option("--preset", synth_args.preset, "standard object preset (object1, object2, object3)");
  synth->add_option("--spec", synth_args.spec_file, "key = value scene spec file")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("--seed", synth_args.seed, "override the scene seed");
  synth->add_option("--frames", synth_args.frames, "override the frame count")->check(CLI::PositiveNumber);

  TrackArgs track_args;
  auto* track = app.add_subcommand("track", "track the object through a scene directory");
  track->add_option("scene", track_args.scene_dir, "directory of PPM frames (truth.csv optional)")
      ->required()
      ->check(CLI::ExistingDirectory);
  track->add_option("--window-multiple", track_args.window_multiple, "search window side / object size")
      ->check(CLI::PositiveNumber);
  track->add_flag("--full-frame", track_args.full_frame, "search the whole frame every step");
  track->add_option("--out", track_args.out, "output directory (default <scene>/track)");
  track_args.flags.add_to(*track);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep window multiples over presets or scenes and fit cost/error");
  sweep_cmd->add_option("--preset", sweep_args.presets, "preset(s) to sweep (default: all)");
  sweep_cmd->add_option("--scene", sweep_args.scene_dirs, "scene directory(ies) with truth.csv")
      ->check(CLI::ExistingDirectory);
  sweep_cmd->add_option("--multiples", sweep_args.multiples, "window multiples (default 0.5,1,...,9.5)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--trials", sweep_args.trials, "trials per cell")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--frames", sweep_args.frames, "override preset frame count")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep_args.seed, "override preset base seed");
  sweep_cmd->add_option("--threads", sweep_args.threads, "worker threads (0 = hardware)");
  sweep_cmd->add_option("--out", sweep_args.out, "output directory");
  sweep_cmd->add_option("--range-lo", sweep_args.range_lo, "analysis range start");
  sweep_cmd->add_option("--range-hi", sweep_args.range_hi, "analysis range end");
  sweep_args.flags.add_to(*sweep_cmd);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "re-run the curve analysis on an existing sweep directory");
  report->add_option("dir", report_args.dir, "directory containing sweep.csv")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", report_args.out, "output directory (default: the input directory)");
  report->add_option("--range-lo", report_args.range_lo, "analysis range start");
  report->add_option("--range-hi", report_args.range_hi, "analysis range end");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit a polynomial or exponential to two CSV columns");
  fit->add_option("csv", fit_args.csv, "CSV with a header row")->required()->check(CLI::ExistingFile);
  fit->add_option("--model", fit_args.model, "poly0..poly9 or exp")
      ->check(CLI::IsMember({"exp", "poly0", "poly1", "poly2", "poly3", "poly4", "poly5", "poly6", "poly7", "poly8",
                             "poly9"}));
  fit->add_option("--x-col", fit_args.x_col, "x column name (default: first)");
  fit->add_option("--y-col", fit_args.y_col, "y column name (default: second)");
  fit->add_option("--out", fit_args.out, "write JSON here instead of stdout");

  OptimumArgs opt_args;
  auto* optimum = app.add_subcommand("optimum", "intersection and argmin of a polynomial cost and exponential error");
  optimum->add_option("--poly", opt_args.poly, "coefficients a0,a1,... (a_i multiplies x^i)")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  optimum->add_option("--exp", opt_args.exp, "a b")->required()->expected(2);
  optimum->add_option("--range", opt_args.range, "lo hi")->expected(2);
  optimum->add_option("--step", opt_args.step, "argmin grid step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*synth) return run_synth(synth_args);
    if (*track) return run_track(track_args);
    if (*sweep_cmd) return run_sweep_cmd(sweep_args);
    if (*report) return run_report(report_args);
    if (*fit) return run_fit(fit_args);
    if (*optimum) return run_optimum(opt_args);
  } catch (const UsageError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
