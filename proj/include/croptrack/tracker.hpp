#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "croptrack/image.hpp"
#include "croptrack/imaging.hpp"
#include "croptrack/kalman.hpp"

namespace croptrack {

struct TrackerConfig {
  /// Search-window side as a multiple of the object's largest initial dimension.
  double window_multiple = 2.0;
  /// Search the whole frame every step (window side = max(frame width, height)).
  bool full_frame = false;
  double detect_threshold = kDefaultThreshold;
  int median_radius = kDefaultMedianRadius;
  KalmanNoise kalman;
  int max_init_frames = 30;
  /// Innovation gate on the squared Mahalanobis distance; detections beyond it count as misses. 0 disables.
  double gate = 0.0;
  /// Record per-step wall-clock time. When false every elapsed value is 0, which keeps outputs reproducible.
  bool measure_time = true;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Initialization {
  KalmanState state;
  int window_side = 1;
  std::size_t start_index = 0;
  Detection detection;
};

struct Crop {
  Frame sub;
  /// Window position in full-frame coordinates; (window.x, window.y) is the sub-frame offset.
  BoundingBox window;
};

struct TrackRecord {
  std::size_t frame_index = 0;
  Point2 predicted_center;
  BoundingBox crop_window;
  std::optional<Point2> detected_center;
  Point2 corrected_center;
  long long pixels_processed = 0;
  double elapsed_s = 0.0;
};

struct StepResult {
  KalmanState state;
  TrackRecord record;
};

struct TrackResult {
  std::vector<TrackRecord> records;
  int window_side = 1;
  std::size_t start_index = 0;
  double success_rate = 0.0;
  double mean_elapsed = 0.0;
  long long total_pixels = 0;
  /// Per-record Euclidean error of the corrected centre; empty without ground truth.
  std::vector<double> distance_errors;
  std::optional<double> mean_distance_error;
};

/// Rounds half away from zero.
[[nodiscard]] long long round_half_away(double v);

/// Full-frame detection on successive frames until the object is found (at most cfg.max_init_frames).
[[nodiscard]] Initialization initialize(std::span<const Frame> frames, const TrackerConfig& cfg);

/// side x side window centred on round(center), shifted to lie inside the frame and truncated to frame size.
[[nodiscard]] BoundingBox crop_window(int frame_width, int frame_height, Point2 center, int side);
[[nodiscard]] Crop crop(const Frame& frame, Point2 center, int side);

/// Predict, crop at the prediction, detect inside the crop, then correct. A miss keeps the prediction.
[[nodiscard]] StepResult track_step(const KalmanState& state, const Frame& frame, std::size_t frame_index,
                                    int window_side, const TrackerConfig& cfg);

/// Initializes and tracks every frame after the initialization frame.
[[nodiscard]] TrackResult track_video(std::span<const Frame> frames, const TrackerConfig& cfg,
                                      std::optional<std::span<const Point2>> truth = std::nullopt);

}  // namespace croptrack
