#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "croptrack/sweep.hpp"
#include "croptrack/tracker.hpp"

namespace croptrack {

/// Rounds to six significant digits so JSON output matches the CSV precision.
[[nodiscard]] double sig6(double v);

[[nodiscard]] nlohmann::json to_json(const TrackResult& result);
[[nodiscard]] nlohmann::json to_json(const PolyModel& m);
[[nodiscard]] nlohmann::json to_json(const ExpModel& m);
[[nodiscard]] nlohmann::json to_json(const CurveFit& fit);
[[nodiscard]] nlohmann::json to_json(const SweepReport& report);

/// frame_index,pred_x,pred_y,det_x,det_y,corr_x,corr_y,pixels,elapsed_s (det_* empty on a miss).
void write_track_csv(std::ostream& out, const TrackResult& result);

/// One row per object x window multiple.
void write_sweep_csv(std::ostream& out, const std::vector<ObjectSweep>& objects);
/// One row per object for the whole-frame baseline.
void write_full_frame_csv(std::ostream& out, const std::vector<ObjectSweep>& objects);
/// Inverse of write_sweep_csv (and optionally write_full_frame_csv) for re-analysis.
[[nodiscard]] std::vector<ObjectSweep> read_sweep_csv(const std::filesystem::path& sweep_csv,
                                                      const std::filesystem::path& full_frame_csv = {});

/// Two-column "x y" data files for the success, cost, time and error curves, their normalized forms,
/// the fitted models sampled over the analysis range, and the optimum point.
void write_curve_files(const std::filesystem::path& dir, const SweepReport& report, const AnalysisConfig& cfg);

/// sweep.csv, full_frame.csv, report.json and curves/ in `dir`.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepReport& report, const AnalysisConfig& cfg);

}  // namespace croptrack
