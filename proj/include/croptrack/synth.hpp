#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "croptrack/image.hpp"

namespace croptrack {

enum class Shape { Rect, Ellipse };

struct ObjectSpec {
  Shape shape = Shape::Rect;
  int width = 40;
  int height = 40;
  Rgb color{200, 30, 30};
};

struct MotionSpec {
  Point2 start{320.0, 240.0};
  Point2 velocity{4.0, 3.0};  // px/frame
  /// Standard deviation of the per-frame random-walk step added to the position.
  double jitter_sigma = 0.0;
  bool bounce = true;
};

struct ClutterSpec {
  int n_distractors = 0;
  std::vector<Rgb> colors{{128, 128, 128}, {40, 60, 200}, {40, 170, 60}};
};

/// Frames [start, start + length) render without the object.
struct Occlusion {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct SceneSpec {
  std::string name = "scene";
  int frame_width = 640;
  int frame_height = 480;
  std::size_t n_frames = 300;
  ObjectSpec object;
  MotionSpec motion;
  ClutterSpec clutter;
  Rgb background{96, 96, 96};
  /// Per-channel Gaussian noise, in 8-bit intensity units.
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  Occlusion occlusion;

  /// Throws SceneSpecError naming the violated field.
  void validate() const;
};

class SceneSpecError : public std::invalid_argument {
 public:
  SceneSpecError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Scene {
  std::vector<Frame> frames;
  /// Geometric centre of the object in each frame.
  std::vector<Point2> truth;
  /// Rendered object extent per frame (clipped to the frame).
  std::vector<BoundingBox> object_boxes;
};

/// Deterministic for a given spec (including seed).
[[nodiscard]] Scene generate_scene(const SceneSpec& spec);

/// Object trajectory only, without rendering.
[[nodiscard]] std::vector<Point2> generate_trajectory(const SceneSpec& spec);

/// Pixel rectangle covered by an object of the given size centred at `center`.
[[nodiscard]] BoundingBox object_box(Point2 center, int width, int height);

/// Number of pixels the object shape covers when rendered.
[[nodiscard]] long long rendered_area(const ObjectSpec& object);

/// Three presets on a 640x480 frame covering about 2.3 %, 3.8 % (2:1 rectangle) and 0.7 % of the frame.
[[nodiscard]] std::vector<SceneSpec> standard_objects();

}  // namespace croptrack
