#include "croptrack/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/core.h>

#include "croptrack/fitting.hpp"

namespace croptrack {
namespace {

// Keeps rounding of runaway predictions inside int range; anything this far out clamps to the border anyway.
constexpr double kCoordLimit = 1e9;

class StepTimer {
 public:
  explicit StepTimer(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  [[nodiscard]] double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void TrackerConfig::validate() const {
  if (!full_frame && !(window_multiple > 0.0 && std::isfinite(window_multiple))) {
    throw std::invalid_argument(fmt::format("window_multiple must be > 0, got {}", window_multiple));
  }
  if (!(detect_threshold >= 0.0 && detect_threshold <= 1.0)) {
    throw std::invalid_argument(fmt::format("detect_threshold must be in [0,1], got {}", detect_threshold));
  }
  if (median_radius < 1) {
    throw std::invalid_argument(fmt::format("median_radius must be >= 1, got {}", median_radius));
  }
  if (max_init_frames < 1) {
    throw std::invalid_argument(fmt::format("max_init_frames must be >= 1, got {}", max_init_frames));
  }
  if (!(gate >= 0.0)) {
    throw std::invalid_argument(fmt::format("gate must be >= 0, got {}", gate));
  }
  if (!(kalman.initial_position_var >= 0.0) || !(kalman.initial_velocity_var >= 0.0)) {
    throw std::invalid_argument("kalman initial variances must be >= 0");
  }
  (void)constant_velocity_model(kalman.process, kalman.measurement);
}

long long round_half_away(double v) { return std::llround(v); }

Initialization initialize(std::span<const Frame> frames, const TrackerConfig& cfg) {
  cfg.validate();
  if (frames.empty()) throw InitializationError("initialize: no frames");

  const std::size_t limit = std::min(frames.size(), static_cast<std::size_t>(cfg.max_init_frames));
  for (std::size_t i = 0; i < limit; ++i) {
    const auto det = detect_object(frames[i], cfg.detect_threshold, cfg.median_radius);
    if (!det) continue;

    Initialization init;
    init.detection = *det;
    init.start_index = i;
    init.state = initial_state(det->centroid, cfg.kalman);
    if (cfg.full_frame) {
      init.window_side = std::max(frames[i].width(), frames[i].height());
    } else {
      const double side = cfg.window_multiple * std::max(det->bbox.w, det->bbox.h);
      init.window_side = static_cast<int>(std::clamp<long long>(round_half_away(side), 1, 1 << 30));
    }
    return init;
  }
  throw InitializationError(fmt::format("object not detected in the first {} frame(s)", limit));
}

BoundingBox crop_window(int frame_width, int frame_height, Point2 center, int side) {
  if (side < 1) throw std::invalid_argument(fmt::format("crop: side must be >= 1, got {}", side));
  const auto place = [side](double c, int extent) {
    const int len = std::min(side, extent);
    const long long centre = round_half_away(std::clamp(c, -kCoordLimit, kCoordLimit));
    const long long origin = std::clamp<long long>(centre - side / 2, 0, extent - len);
    return std::pair{static_cast<int>(origin), len};
  };
  const auto [x, w] = place(center.x, frame_width);
  const auto [y, h] = place(center.y, frame_height);
  return {x, y, w, h};
}

Crop crop(const Frame& frame, Point2 center, int side) {
  const auto window = crop_window(frame.width(), frame.height(), center, side);
  return {frame.region(window), window};
}

StepResult track_step(const KalmanState& state, const Frame& frame, std::size_t frame_index, int window_side,
                      const TrackerConfig& cfg) {
  const StepTimer timer(cfg.measure_time);
  const auto model = constant_velocity_model(cfg.kalman.process, cfg.kalman.measurement);

  StepResult out;
  out.state = predict(state, model);
  TrackRecord& rec = out.record;
  rec.frame_index = frame_index;
  rec.predicted_center = out.state.position();

  const auto [sub, window] = crop(frame, rec.predicted_center, window_side);
  rec.crop_window = window;
  rec.pixels_processed = window.area();

  if (const auto det = detect_object(sub, cfg.detect_threshold, cfg.median_radius)) {
    const Vec2 z(det->centroid.x + window.x, det->centroid.y + window.y);
    if (cfg.gate <= 0.0 || innovation_distance2(out.state, model, z) <= cfg.gate) {
      rec.detected_center = Point2{z(0), z(1)};
      out.state = correct(out.state, model, z).state;
    }
  }
  rec.corrected_center = out.state.position();
  rec.elapsed_s = timer.seconds();
  return out;
}

TrackResult track_video(std::span<const Frame> frames, const TrackerConfig& cfg,
                        std::optional<std::span<const Point2>> truth) {
  if (truth && truth->size() != frames.size()) {
    throw std::invalid_argument(
        fmt::format("track_video: {} ground-truth points for {} frames", truth->size(), frames.size()));
  }
  const auto init = initialize(frames, cfg);

  TrackResult result;
  result.window_side = init.window_side;
  result.start_index = init.start_index;
  result.records.reserve(frames.size() - init.start_index);

  KalmanState state = init.state;
  std::size_t detected = 0;
  double elapsed = 0.0;
  for (std::size_t i = init.start_index + 1; i < frames.size(); ++i) {
    auto step = track_step(state, frames[i], i, init.window_side, cfg);
    state = step.state;
    detected += step.record.detected_center ? 1 : 0;
    elapsed += step.record.elapsed_s;
    result.total_pixels += step.record.pixels_processed;
    if (truth) result.distance_errors.push_back(euclidean_distance(step.record.corrected_center, (*truth)[i]));
    result.records.push_back(step.record);
  }

  const auto n = result.records.size();
  if (n > 0) {
    result.success_rate = static_cast<double>(detected) / static_cast<double>(n);
    result.mean_elapsed = elapsed / static_cast<double>(n);
    if (truth) {
      double sum = 0.0;
      for (double e : result.distance_errors) sum += e;
      result.mean_distance_error = sum / static_cast<double>(n);
    }
  }
  return result;
}

}  // namespace croptrack
