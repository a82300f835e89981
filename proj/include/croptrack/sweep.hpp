#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "croptrack/fitting.hpp"
#include "croptrack/synth.hpp"
#include "croptrack/tracker.hpp"

namespace croptrack {

/// Aggregate over the trials of one (object, window multiple) cell.
struct SweepPoint {
  double window_multiple = 0.0;
  double mean_elapsed = 0.0;
  double mean_pixels = 0.0;
  double mean_distance_error = 0.0;
  double success_rate = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  /// First failure message, if any trial failed.
  std::string failure;

  [[nodiscard]] bool ok() const { return trials_ok > 0; }
};

struct ObjectSweep {
  std::string name;
  std::vector<SweepPoint> points;
  /// Whole-frame search baseline; window_multiple is 0 here.
  std::optional<SweepPoint> full_frame;
};

/// Normalized curves for one object (or the pooled set) and the models fitted to them.
struct CurveFit {
  std::string name;
  std::vector<double> multiples;
  std::vector<double> norm_cost;   // normalized mean pixels processed
  std::vector<double> norm_error;  // normalized mean distance error
  std::optional<PolyModel> cost_model;
  std::optional<ExpModel> error_model;
  double cost_rms = 0.0;
  double error_rms = 0.0;
  std::optional<Intersection> intersection;
  std::optional<Minimum> argmin;
  /// Degree-5 fit of normalized wall-clock time, when timing was recorded.
  std::optional<PolyModel> time_model;
  std::vector<double> norm_time;
  /// Why a model is missing, e.g. a constant series that cannot be normalized.
  std::string note;
};

struct AnalysisConfig {
  int poly_degree = 5;
  double range_lo = 0.0;
  double range_hi = 10.0;
  double grid_step = 1e-3;
};

struct SweepConfig {
  std::vector<double> multiples;  // empty means default_multiples()
  int trials = 5;
  TrackerConfig tracker;
  bool include_full_frame = true;
  AnalysisConfig analysis;
  /// Worker threads for independent cells; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Source of the frames tracked for one object.
struct SweepObject {
  std::string name;
  /// Generated per trial with seed spec.seed + trial.
  std::optional<SceneSpec> spec;
  /// Loaded footage, reused for every trial.
  std::shared_ptr<const Scene> scene;

  static SweepObject from_spec(SceneSpec spec);
  static SweepObject from_scene(std::string name, Scene scene);
};

struct SweepReport {
  std::vector<ObjectSweep> objects;
  std::vector<CurveFit> per_object;
  CurveFit pooled;
};

/// 0.5, 1.0, ..., 9.5
[[nodiscard]] std::vector<double> default_multiples();

/// Runs every (object, multiple, trial) cell and analyses the result. Cell failures are recorded, not thrown.
[[nodiscard]] SweepReport sweep(const std::vector<SweepObject>& objects, const SweepConfig& cfg);

/// Runs the tracking cells only.
[[nodiscard]] std::vector<ObjectSweep> run_sweep(const std::vector<SweepObject>& objects, const SweepConfig& cfg);

/// Normalizes and fits one object's points.
[[nodiscard]] CurveFit fit_curves(const ObjectSweep& object, const AnalysisConfig& cfg);

/// Per-object normalization averaged over objects at the multiples every object completed.
[[nodiscard]] CurveFit fit_pooled(const std::vector<ObjectSweep>& objects, const AnalysisConfig& cfg);

/// fit_curves for every object plus the pooled fit.
[[nodiscard]] SweepReport analyze(std::vector<ObjectSweep> objects, const AnalysisConfig& cfg);

}  // namespace croptrack
