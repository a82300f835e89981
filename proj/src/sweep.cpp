#include "croptrack/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include <fmt/core.h>

namespace croptrack {
namespace {

struct TrialOutcome {
  bool ok = false;
  double mean_elapsed = 0.0;
  double mean_pixels = 0.0;
  double mean_error = 0.0;
  double success_rate = 0.0;
  std::string failure;
};

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

TrialOutcome run_trial(const Scene& scene, const TrackerConfig& cfg) {
  TrialOutcome out;
  try {
    const auto result = track_video(scene.frames, cfg, std::span<const Point2>(scene.truth));
    if (result.records.empty()) {
      out.failure = "no frames after initialization";
      return out;
    }
    out.ok = true;
    out.mean_elapsed = result.mean_elapsed;
    out.mean_pixels = static_cast<double>(result.total_pixels) / static_cast<double>(result.records.size());
    out.mean_error = result.mean_distance_error.value_or(0.0);
    out.success_rate = result.success_rate;
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  return out;
}

SweepPoint aggregate(double multiple, const std::vector<TrialOutcome>& trials) {
  SweepPoint p;
  p.window_multiple = multiple;
  for (const auto& t : trials) {
    if (!t.ok) {
      ++p.trials_failed;
      if (p.failure.empty()) p.failure = t.failure;
      continue;
    }
    ++p.trials_ok;
    p.mean_elapsed += t.mean_elapsed;
    p.mean_pixels += t.mean_pixels;
    p.mean_distance_error += t.mean_error;
    p.success_rate += t.success_rate;
  }
  if (p.trials_ok > 0) {
    const double n = p.trials_ok;
    p.mean_elapsed /= n;
    p.mean_pixels /= n;
    p.mean_distance_error /= n;
    p.success_rate /= n;
  }
  return p;
}

/// Fits already-normalized series.
void fit_normalized(CurveFit& fit, const AnalysisConfig& cfg) {
  const auto note = [&fit](const std::string& msg) {
    if (!fit.note.empty()) fit.note += "; ";
    fit.note += msg;
  };
  if (!fit.norm_cost.empty()) {
    try {
      fit.cost_model = polyfit(fit.multiples, fit.norm_cost, cfg.poly_degree);
      fit.cost_rms = rms_residual(*fit.cost_model, fit.multiples, fit.norm_cost);
    } catch (const std::exception& e) {
      note(fmt::format("cost fit: {}", e.what()));
    }
  }
  if (!fit.norm_error.empty()) {
    try {
      fit.error_model = expfit(fit.multiples, fit.norm_error);
      fit.error_rms = rms_residual(*fit.error_model, fit.multiples, fit.norm_error);
    } catch (const std::exception& e) {
      note(fmt::format("error fit: {}", e.what()));
    }
  }
  if (!fit.norm_time.empty()) {
    try {
      fit.time_model = polyfit(fit.multiples, fit.norm_time, cfg.poly_degree);
    } catch (const std::exception& e) {
      note(fmt::format("time fit: {}", e.what()));
    }
  }
  if (fit.cost_model && fit.error_model) {
    fit.intersection = find_intersection(*fit.cost_model, *fit.error_model, cfg.range_lo, cfg.range_hi);
    if (!fit.intersection) note(fmt::format("no intersection in [{}, {}]", cfg.range_lo, cfg.range_hi));
    fit.argmin = argmin_sum(*fit.cost_model, *fit.error_model, cfg.range_lo, cfg.range_hi, cfg.grid_step);
  }
}

/// Normalizes `series`, recording the reason in `note` and returning empty when it is constant.
std::vector<double> try_normalize(const std::vector<double>& series, const char* what, std::string& note) {
  try {
    return normalize(series);
  } catch (const std::exception& e) {
    if (!note.empty()) note += "; ";
    note += fmt::format("{}: {}", what, e.what());
    return {};
  }
}

bool timing_recorded(const std::vector<double>& times) {
  return std::any_of(times.begin(), times.end(), [](double t) { return t > 0.0; });
}

}  // namespace

SweepObject SweepObject::from_spec(SceneSpec spec) {
  SweepObject obj;
  obj.name = spec.name;
  obj.spec = std::move(spec);
  return obj;
}

SweepObject SweepObject::from_scene(std::string name, Scene scene) {
  SweepObject obj;
  obj.name = std::move(name);
  obj.scene = std::make_shared<const Scene>(std::move(scene));
  return obj;
}

std::vector<double> default_multiples() {
  std::vector<double> out;
  for (int i = 1; i <= 19; ++i) out.push_back(0.5 * i);
  return out;
}

std::vector<ObjectSweep> run_sweep(const std::vector<SweepObject>& objects, const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument(fmt::format("sweep: trials must be >= 1, got {}", cfg.trials));
  const auto multiples = cfg.multiples.empty() ? default_multiples() : cfg.multiples;
  for (double m : multiples) {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument(fmt::format("sweep: invalid multiple {}", m));
  }
  const unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());

  // Per cell configs; the trailing one is the full-frame baseline.
  std::vector<TrackerConfig> cell_cfgs;
  for (double m : multiples) {
    TrackerConfig c = cfg.tracker;
    c.full_frame = false;
    c.window_multiple = m;
    cell_cfgs.push_back(c);
  }
  if (cfg.include_full_frame) {
    TrackerConfig c = cfg.tracker;
    c.full_frame = true;
    cell_cfgs.push_back(c);
  }

  std::vector<ObjectSweep> out;
  for (const auto& obj : objects) {
    // outcomes[cell][trial]
    std::vector<std::vector<TrialOutcome>> outcomes(cell_cfgs.size(), std::vector<TrialOutcome>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t) {
      std::shared_ptr<const Scene> scene = obj.scene;
      std::string scene_error;
      if (!scene && obj.spec) {
        SceneSpec spec = *obj.spec;
        spec.seed += static_cast<std::uint64_t>(t);
        try {
          scene = std::make_shared<const Scene>(generate_scene(spec));
        } catch (const std::exception& e) {
          scene_error = e.what();
        }
      }
      if (!scene) {
        for (auto& cell : outcomes) cell[t].failure = scene_error.empty() ? "object has no scene source" : scene_error;
        continue;
      }
      parallel_for(cell_cfgs.size(), threads, [&](std::size_t c) { outcomes[c][t] = run_trial(*scene, cell_cfgs[c]); });
    }

    ObjectSweep result;
    result.name = obj.name;
    for (std::size_t c = 0; c < multiples.size(); ++c) result.points.push_back(aggregate(multiples[c], outcomes[c]));
    if (cfg.include_full_frame) result.full_frame = aggregate(0.0, outcomes.back());
    out.push_back(std::move(result));
  }
  return out;
}

CurveFit fit_curves(const ObjectSweep& object, const AnalysisConfig& cfg) {
  CurveFit fit;
  fit.name = object.name;
  std::vector<double> pixels, errors, times;
  for (const auto& p : object.points) {
    if (!p.ok()) continue;
    fit.multiples.push_back(p.window_multiple);
    pixels.push_back(p.mean_pixels);
    errors.push_back(p.mean_distance_error);
    times.push_back(p.mean_elapsed);
  }
  fit.norm_cost = try_normalize(pixels, "cost", fit.note);
  fit.norm_error = try_normalize(errors, "error", fit.note);
  if (timing_recorded(times)) fit.norm_time = try_normalize(times, "time", fit.note);
  fit_normalized(fit, cfg);
  return fit;
}

CurveFit fit_pooled(const std::vector<ObjectSweep>& objects, const AnalysisConfig& cfg) {
  CurveFit fit;
  fit.name = "pooled";
  if (objects.empty()) {
    fit.note = "no objects";
    return fit;
  }

  // Multiples completed by every object.
  std::map<double, std::size_t> counts;
  for (const auto& obj : objects) {
    for (const auto& p : obj.points) {
      if (p.ok()) ++counts[p.window_multiple];
    }
  }
  for (const auto& [m, n] : counts) {
    if (n == objects.size()) fit.multiples.push_back(m);
  }

  bool with_time = true;
  std::vector<double> cost(fit.multiples.size(), 0.0);
  std::vector<double> error(fit.multiples.size(), 0.0);
  std::vector<double> time(fit.multiples.size(), 0.0);
  for (const auto& obj : objects) {
    std::vector<double> pixels, errors, times;
    for (double m : fit.multiples) {
      const auto it = std::find_if(obj.points.begin(), obj.points.end(),
                                   [m](const SweepPoint& p) { return p.ok() && p.window_multiple == m; });
      pixels.push_back(it->mean_pixels);
      errors.push_back(it->mean_distance_error);
      times.push_back(it->mean_elapsed);
    }
    const auto nc = try_normalize(pixels, fmt::format("{} cost", obj.name).c_str(), fit.note);
    const auto ne = try_normalize(errors, fmt::format("{} error", obj.name).c_str(), fit.note);
    if (nc.empty() || ne.empty()) {
      fit.multiples.clear();
      return fit;
    }
    for (std::size_t i = 0; i < nc.size(); ++i) {
      cost[i] += nc[i] / static_cast<double>(objects.size());
      error[i] += ne[i] / static_cast<double>(objects.size());
    }
    if (with_time && timing_recorded(times)) {
      std::string ignored;
      const auto nt = try_normalize(times, "time", ignored);
      if (nt.empty()) {
        with_time = false;
      } else {
        for (std::size_t i = 0; i < nt.size(); ++i) time[i] += nt[i] / static_cast<double>(objects.size());
      }
    } else {
      with_time = false;
    }
  }
  fit.norm_cost = std::move(cost);
  fit.norm_error = std::move(error);
  if (with_time) fit.norm_time = std::move(time);
  fit_normalized(fit, cfg);
  return fit;
}

SweepReport analyze(std::vector<ObjectSweep> objects, const AnalysisConfig& cfg) {
  SweepReport report;
  for (const auto& obj : objects) report.per_object.push_back(fit_curves(obj, cfg));
  report.pooled = fit_pooled(objects, cfg);
  report.objects = std::move(objects);
  return report;
}

SweepReport sweep(const std::vector<SweepObject>& objects, const SweepConfig& cfg) {
  return analyze(run_sweep(objects, cfg), cfg.analysis);
}

}  // namespace croptrack
