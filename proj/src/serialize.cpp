#include "croptrack/serialize.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>

#include "croptrack/csv.hpp"

namespace croptrack {
namespace {

using nlohmann::json;

json rounded(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(sig6(v));
  return arr;
}

json point_json(const SweepPoint& p) {
  json j = {{"window_multiple", sig6(p.window_multiple)},
            {"mean_elapsed_s", sig6(p.mean_elapsed)},
            {"mean_pixels", sig6(p.mean_pixels)},
            {"mean_distance_error", sig6(p.mean_distance_error)},
            {"success_rate", sig6(p.success_rate)},
            {"trials_ok", p.trials_ok},
            {"trials_failed", p.trials_failed}};
  if (!p.failure.empty()) j["failure"] = p.failure;
  return j;
}

std::vector<std::string> point_fields(const SweepPoint& p) {
  return {fmt_num(p.mean_elapsed),        fmt_num(p.mean_pixels),      fmt_num(p.mean_distance_error),
          fmt_num(p.success_rate),        std::to_string(p.trials_ok), std::to_string(p.trials_failed)};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot create {}", path.string()));
  return out;
}

void write_xy(const std::filesystem::path& path, const std::vector<double>& xs, const std::vector<double>& ys) {
  auto out = open_out(path);
  out << "# x y\n";
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) out << fmt_num(xs[i]) << ' ' << fmt_num(ys[i]) << '\n';
}

template <typename Model>
void write_model_curve(const std::filesystem::path& path, const Model& m, const AnalysisConfig& cfg,
                       double (*eval)(const Model&, double)) {
  std::vector<double> xs, ys;
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double x = cfg.range_lo + (cfg.range_hi - cfg.range_lo) * i / n;
    xs.push_back(x);
    ys.push_back(eval(m, x));
  }
  write_xy(path, xs, ys);
}

SweepPoint parse_point(const CsvTable& t, const std::vector<std::string>& row) {
  SweepPoint p;
  p.mean_elapsed = parse_double(row[t.column("mean_elapsed_s")], "mean_elapsed_s");
  p.mean_pixels = parse_double(row[t.column("mean_pixels")], "mean_pixels");
  p.mean_distance_error = parse_double(row[t.column("mean_distance_error")], "mean_distance_error");
  p.success_rate = parse_double(row[t.column("success_rate")], "success_rate");
  p.trials_ok = static_cast<int>(parse_double(row[t.column("trials_ok")], "trials_ok"));
  p.trials_failed = static_cast<int>(parse_double(row[t.column("trials_failed")], "trials_failed"));
  return p;
}

}  // namespace

double sig6(double v) {
  if (v == 0.0) return 0.0;
  return std::stod(fmt::format("{:.6g}", v));
}

json to_json(const TrackResult& result) {
  json records = json::array();
  for (const auto& r : result.records) {
    json j = {{"frame_index", r.frame_index},
              {"predicted_center", {sig6(r.predicted_center.x), sig6(r.predicted_center.y)}},
              {"crop_window", {{"x", r.crop_window.x}, {"y", r.crop_window.y}, {"w", r.crop_window.w}, {"h", r.crop_window.h}}},
              {"detected_center", nullptr},
              {"corrected_center", {sig6(r.corrected_center.x), sig6(r.corrected_center.y)}},
              {"pixels_processed", r.pixels_processed},
              {"elapsed_s", sig6(r.elapsed_s)}};
    if (r.detected_center) j["detected_center"] = {sig6(r.detected_center->x), sig6(r.detected_center->y)};
    records.push_back(std::move(j));
  }
  json out = {{"window_side", result.window_side},
              {"start_index", result.start_index},
              {"success_rate", sig6(result.success_rate)},
              {"mean_elapsed_s", sig6(result.mean_elapsed)},
              {"total_pixels", result.total_pixels},
              {"mean_distance_error", nullptr},
              {"records", std::move(records)}};
  if (result.mean_distance_error) out["mean_distance_error"] = sig6(*result.mean_distance_error);
  if (!result.distance_errors.empty()) out["distance_errors"] = rounded(result.distance_errors);
  return out;
}

json to_json(const PolyModel& m) { return {{"coeffs", rounded(m.coeffs)}}; }

json to_json(const ExpModel& m) { return {{"a", sig6(m.a)}, {"b", sig6(m.b)}}; }

json to_json(const CurveFit& fit) {
  json j = {{"name", fit.name},
            {"multiples", rounded(fit.multiples)},
            {"norm_cost", rounded(fit.norm_cost)},
            {"norm_error", rounded(fit.norm_error)},
            {"cost_model", nullptr},
            {"error_model", nullptr},
            {"intersection", nullptr},
            {"argmin", nullptr}};
  if (!fit.norm_time.empty()) j["norm_time"] = rounded(fit.norm_time);
  if (fit.cost_model) {
    j["cost_model"] = to_json(*fit.cost_model);
    j["cost_model"]["rms"] = sig6(fit.cost_rms);
  }
  if (fit.error_model) {
    j["error_model"] = to_json(*fit.error_model);
    j["error_model"]["rms"] = sig6(fit.error_rms);
  }
  if (fit.time_model) j["time_model"] = to_json(*fit.time_model);
  if (fit.intersection) j["intersection"] = {{"x", sig6(fit.intersection->x)}, {"value", sig6(fit.intersection->value)}};
  if (fit.argmin) j["argmin"] = {{"x", sig6(fit.argmin->x)}, {"value", sig6(fit.argmin->value)}};
  if (!fit.note.empty()) j["note"] = fit.note;
  return j;
}

json to_json(const SweepReport& report) {
  json objects = json::array();
  for (const auto& obj : report.objects) {
    json points = json::array();
    for (const auto& p : obj.points) points.push_back(point_json(p));
    json o = {{"name", obj.name}, {"points", std::move(points)}, {"full_frame", nullptr}};
    if (obj.full_frame) o["full_frame"] = point_json(*obj.full_frame);
    objects.push_back(std::move(o));
  }
  json fits = json::array();
  for (const auto& f : report.per_object) fits.push_back(to_json(f));

  json optimum = {{"headline", "intersection"}, {"intersection", nullptr}, {"argmin", nullptr}};
  if (report.pooled.intersection) {
    optimum["intersection"] = {{"x", sig6(report.pooled.intersection->x)},
                               {"value", sig6(report.pooled.intersection->value)}};
  }
  if (report.pooled.argmin) {
    optimum["argmin"] = {{"x", sig6(report.pooled.argmin->x)}, {"value", sig6(report.pooled.argmin->value)}};
  }
  return {{"cost_metric", "pixels_processed"},
          {"objects", std::move(objects)},
          {"fits", std::move(fits)},
          {"pooled", to_json(report.pooled)},
          {"optimum", std::move(optimum)}};
}

void write_track_csv(std::ostream& out, const TrackResult& result) {
  write_csv_row(out, {"frame_index", "pred_x", "pred_y", "det_x", "det_y", "corr_x", "corr_y", "pixels", "elapsed_s"});
  for (const auto& r : result.records) {
    write_csv_row(out, {std::to_string(r.frame_index), fmt_num(r.predicted_center.x), fmt_num(r.predicted_center.y),
                        r.detected_center ? fmt_num(r.detected_center->x) : "",
                        r.detected_center ? fmt_num(r.detected_center->y) : "", fmt_num(r.corrected_center.x),
                        fmt_num(r.corrected_center.y), std::to_string(r.pixels_processed), fmt_num(r.elapsed_s)});
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<ObjectSweep>& objects) {
  write_csv_row(out, {"object", "window_multiple", "mean_elapsed_s", "mean_pixels", "mean_distance_error",
                      "success_rate", "trials_ok", "trials_failed"});
  for (const auto& obj : objects) {
    for (const auto& p : obj.points) {
      std::vector<std::string> row{obj.name, fmt_num(p.window_multiple)};
      const auto rest = point_fields(p);
      row.insert(row.end(), rest.begin(), rest.end());
      write_csv_row(out, row);
    }
  }
}

void write_full_frame_csv(std::ostream& out, const std::vector<ObjectSweep>& objects) {
  write_csv_row(out, {"object", "mean_elapsed_s", "mean_pixels", "mean_distance_error", "success_rate", "trials_ok",
                      "trials_failed"});
  for (const auto& obj : objects) {
    if (!obj.full_frame) continue;
    std::vector<std::string> row{obj.name};
    const auto rest = point_fields(*obj.full_frame);
    row.insert(row.end(), rest.begin(), rest.end());
    write_csv_row(out, row);
  }
}

std::vector<ObjectSweep> read_sweep_csv(const std::filesystem::path& sweep_csv,
                                        const std::filesystem::path& full_frame_csv) {
  const auto table = read_csv(sweep_csv);
  std::vector<ObjectSweep> objects;
  std::map<std::string, std::size_t> index;
  const auto object_for = [&](const std::string& name) -> ObjectSweep& {
    const auto [it, inserted] = index.emplace(name, objects.size());
    if (inserted) objects.push_back({name, {}, std::nullopt});
    return objects[it->second];
  };
  for (const auto& row : table.rows) {
    auto p = parse_point(table, row);
    p.window_multiple = parse_double(row[table.column("window_multiple")], "window_multiple");
    object_for(row[table.column("object")]).points.push_back(p);
  }
  if (!full_frame_csv.empty() && std::filesystem::exists(full_frame_csv)) {
    const auto ff = read_csv(full_frame_csv);
    for (const auto& row : ff.rows) object_for(row[ff.column("object")]).full_frame = parse_point(ff, row);
  }
  return objects;
}

void write_curve_files(const std::filesystem::path& dir, const SweepReport& report, const AnalysisConfig& cfg) {
  std::filesystem::create_directories(dir);
  for (const auto& obj : report.objects) {
    std::vector<double> xs, success, pixels, elapsed, error;
    for (const auto& p : obj.points) {
      if (!p.ok()) continue;
      xs.push_back(p.window_multiple);
      success.push_back(p.success_rate);
      pixels.push_back(p.mean_pixels);
      elapsed.push_back(p.mean_elapsed);
      error.push_back(p.mean_distance_error);
    }
    write_xy(dir / (obj.name + "_success.dat"), xs, success);
    write_xy(dir / (obj.name + "_pixels.dat"), xs, pixels);
    write_xy(dir / (obj.name + "_time.dat"), xs, elapsed);
    write_xy(dir / (obj.name + "_error.dat"), xs, error);
  }
  auto fits = report.per_object;
  fits.push_back(report.pooled);
  for (const auto& fit : fits) {
    write_xy(dir / (fit.name + "_norm_cost.dat"), fit.multiples, fit.norm_cost);
    write_xy(dir / (fit.name + "_norm_error.dat"), fit.multiples, fit.norm_error);
    if (!fit.norm_time.empty()) write_xy(dir / (fit.name + "_norm_time.dat"), fit.multiples, fit.norm_time);
    if (fit.cost_model) write_model_curve(dir / (fit.name + "_fit_cost.dat"), *fit.cost_model, cfg, &eval_poly);
    if (fit.error_model) write_model_curve(dir / (fit.name + "_fit_error.dat"), *fit.error_model, cfg, &eval_exp);
    if (fit.intersection) write_xy(dir / (fit.name + "_optimum.dat"), {fit.intersection->x}, {fit.intersection->value});
  }
}

void write_sweep_outputs(const std::filesystem::path& dir, const SweepReport& report, const AnalysisConfig& cfg) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, report.objects);
  }
  {
    auto out = open_out(dir / "full_frame.csv");
    write_full_frame_csv(out, report.objects);
  }
  {
    auto out = open_out(dir / "report.json");
    out << to_json(report).dump(2) << '\n';
  }
  write_curve_files(dir / "curves", report, cfg);
}

}  // namespace croptrack
