#include "croptrack/synth.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "croptrack/imaging.hpp"
#include "croptrack/random.hpp"
#include "croptrack/tracker.hpp"

namespace croptrack {
namespace {

enum Stream : std::uint64_t { kMotion = 1, kClutter = 2, kNoiseBase = 1000 };

bool inside_shape(Shape shape, const BoundingBox& box, int x, int y) {
  if (shape == Shape::Rect) return true;
  const double dx = (x - (box.x + (box.w - 1) / 2.0)) / (box.w / 2.0);
  const double dy = (y - (box.y + (box.h - 1) / 2.0)) / (box.h / 2.0);
  return dx * dx + dy * dy <= 1.0;
}

/// Draws the shape of the unclipped `box`, clipped to the frame.
void draw(Frame& frame, Shape shape, const BoundingBox& box, Rgb color) {
  const int x0 = std::max(box.x, 0);
  const int y0 = std::max(box.y, 0);
  const int x1 = std::min(box.x + box.w, frame.width());
  const int y1 = std::min(box.y + box.h, frame.height());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (inside_shape(shape, box, x, y)) frame.set(x, y, color);
    }
  }
}

/// Bounding box of the pixels `draw` actually sets.
BoundingBox drawn_box(Shape shape, const BoundingBox& box, int width, int height) {
  int min_x = width, min_y = height, max_x = -1, max_y = -1;
  for (int y = std::max(box.y, 0); y < std::min(box.y + box.h, height); ++y) {
    for (int x = std::max(box.x, 0); x < std::min(box.x + box.w, width); ++x) {
      if (!inside_shape(shape, box, x, y)) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) return {0, 0, 0, 0};
  return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

std::uint8_t add_noise(std::uint8_t v, double noise) {
  return static_cast<std::uint8_t>(std::clamp<long long>(round_half_away(v + noise), 0, 255));
}

// Keeps `c` within [lo, hi] by mirroring at the walls; returns true if a wall was hit.
bool reflect(double& c, double lo, double hi) {
  if (hi <= lo) {
    c = 0.5 * (lo + hi);
    return false;
  }
  bool hit = false;
  if (c > hi) {
    c = 2.0 * hi - c;
    hit = true;
  } else if (c < lo) {
    c = 2.0 * lo - c;
    hit = true;
  }
  c = std::clamp(c, lo, hi);
  return hit;
}

}  // namespace

SceneSpecError::SceneSpecError(std::string field, const std::string& message)
    : std::invalid_argument(fmt::format("invalid scene spec field '{}': {}", field, message)),
      field_(std::move(field)) {}

BoundingBox object_box(Point2 center, int width, int height) {
  const auto x = round_half_away(center.x - (width - 1) / 2.0);
  const auto y = round_half_away(center.y - (height - 1) / 2.0);
  return {static_cast<int>(x), static_cast<int>(y), width, height};
}

long long rendered_area(const ObjectSpec& object) {
  const BoundingBox box{0, 0, object.width, object.height};
  long long n = 0;
  for (int y = 0; y < box.h; ++y) {
    for (int x = 0; x < box.w; ++x) n += inside_shape(object.shape, box, x, y) ? 1 : 0;
  }
  return n;
}

void SceneSpec::validate() const {
  if (frame_width < 1 || frame_height < 1) {
    throw SceneSpecError("frame_size", fmt::format("must be positive, got {}x{}", frame_width, frame_height));
  }
  if (n_frames < 1) throw SceneSpecError("n_frames", "must be >= 1");
  if (object.width < 1 || object.height < 1 || object.width > frame_width || object.height > frame_height) {
    throw SceneSpecError("object.size", fmt::format("{}x{} does not fit a {}x{} frame", object.width, object.height,
                                                    frame_width, frame_height));
  }
  if (!(red_difference(object.color) > kDefaultThreshold)) {
    throw SceneSpecError("object.color", fmt::format("red difference {:.3f} is not above the detection threshold {}",
                                                     red_difference(object.color), kDefaultThreshold));
  }
  for (std::size_t i = 0; i < clutter.colors.size(); ++i) {
    if (red_difference(clutter.colors[i]) > kDefaultThreshold) {
      throw SceneSpecError(fmt::format("clutter.distractor_colors[{}]", i), "distractor color is red-dominant");
    }
  }
  if (clutter.n_distractors < 0) throw SceneSpecError("clutter.n_distractors", "must be >= 0");
  if (clutter.n_distractors > 0 && clutter.colors.empty()) {
    throw SceneSpecError("clutter.distractor_colors", "distractors requested but no colors given");
  }
  if (red_difference(background) > kDefaultThreshold) {
    throw SceneSpecError("background", "background color is red-dominant");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw SceneSpecError("noise_sigma", fmt::format("must be a finite value >= 0, got {}", noise_sigma));
  }
  if (!(motion.jitter_sigma >= 0.0) || !std::isfinite(motion.jitter_sigma)) {
    throw SceneSpecError("motion.jitter_sigma", fmt::format("must be a finite value >= 0, got {}", motion.jitter_sigma));
  }
  if (!std::isfinite(motion.velocity.x) || !std::isfinite(motion.velocity.y)) {
    throw SceneSpecError("motion.velocity", "must be finite");
  }
  const double hw = object.width / 2.0;
  const double hh = object.height / 2.0;
  const Point2 s = motion.start;
  if (!(s.x - hw >= -0.5 && s.x + hw <= frame_width - 0.5 && s.y - hh >= -0.5 && s.y + hh <= frame_height - 0.5)) {
    throw SceneSpecError("motion.start",
                         fmt::format("object at ({}, {}) does not fit inside the frame", motion.start.x, motion.start.y));
  }
}

std::vector<Point2> generate_trajectory(const SceneSpec& spec) {
  spec.validate();
  Rng rng(mix_seed(spec.seed, kMotion));
  // Pixel i covers [i - 0.5, i + 0.5]; the centre range keeps the whole object inside the frame.
  const double lo_x = spec.object.width / 2.0 - 0.5;
  const double hi_x = spec.frame_width - 0.5 - spec.object.width / 2.0;
  const double lo_y = spec.object.height / 2.0 - 0.5;
  const double hi_y = spec.frame_height - 0.5 - spec.object.height / 2.0;

  std::vector<Point2> truth;
  truth.reserve(spec.n_frames);
  Point2 pos = spec.motion.start;
  Point2 vel = spec.motion.velocity;
  truth.push_back(pos);
  for (std::size_t k = 1; k < spec.n_frames; ++k) {
    pos.x += vel.x;
    pos.y += vel.y;
    if (spec.motion.jitter_sigma > 0.0) {
      pos.x += spec.motion.jitter_sigma * rng.normal();
      pos.y += spec.motion.jitter_sigma * rng.normal();
    }
    if (spec.motion.bounce) {
      if (reflect(pos.x, lo_x, hi_x)) vel.x = -vel.x;
      if (reflect(pos.y, lo_y, hi_y)) vel.y = -vel.y;
    } else if (pos.x < 0.0 || pos.y < 0.0 || pos.x > spec.frame_width - 1 || pos.y > spec.frame_height - 1) {
      throw SceneSpecError("motion", fmt::format("object centre leaves the frame at frame {} without bounce", k));
    }
    truth.push_back(pos);
  }
  return truth;
}

Scene generate_scene(const SceneSpec& spec) {
  Scene scene;
  scene.truth = generate_trajectory(spec);

  Frame backdrop(spec.frame_width, spec.frame_height, spec.background);
  Rng clutter_rng(mix_seed(spec.seed, kClutter));
  for (int i = 0; i < spec.clutter.n_distractors; ++i) {
    const int w = std::min(spec.frame_width, 16 + static_cast<int>(clutter_rng.next() % 33));
    const int h = std::min(spec.frame_height, 16 + static_cast<int>(clutter_rng.next() % 33));
    const int x = static_cast<int>(clutter_rng.next() % static_cast<std::uint64_t>(spec.frame_width - w + 1));
    const int y = static_cast<int>(clutter_rng.next() % static_cast<std::uint64_t>(spec.frame_height - h + 1));
    const Shape shape = (clutter_rng.next() & 1U) != 0 ? Shape::Ellipse : Shape::Rect;
    draw(backdrop, shape, {x, y, w, h}, spec.clutter.colors[static_cast<std::size_t>(i) % spec.clutter.colors.size()]);
  }

  scene.frames.reserve(spec.n_frames);
  scene.object_boxes.reserve(spec.n_frames);
  const auto& occ = spec.occlusion;
  for (std::size_t k = 0; k < spec.n_frames; ++k) {
    Frame frame = backdrop;
    const auto box = object_box(scene.truth[k], spec.object.width, spec.object.height);
    const bool hidden = k >= occ.start && k < occ.start + occ.length;
    if (!hidden) draw(frame, spec.object.shape, box, spec.object.color);
    scene.object_boxes.push_back(drawn_box(spec.object.shape, box, spec.frame_width, spec.frame_height));

    if (spec.noise_sigma > 0.0) {
      Rng noise(mix_seed(spec.seed, kNoiseBase + k));
      for (auto& v : frame.data()) v = add_noise(v, spec.noise_sigma * noise.fast_normal());
    }
    scene.frames.push_back(std::move(frame));
  }
  return scene;
}

std::vector<SceneSpec> standard_objects() {
  SceneSpec base;
  base.frame_width = 640;
  base.frame_height = 480;
  base.n_frames = 300;
  base.motion.jitter_sigma = 1.0;
  base.motion.bounce = true;
  base.clutter.n_distractors = 6;
  base.noise_sigma = 4.0;

  // Round object, ~2.3 % of the frame.
  SceneSpec o1 = base;
  o1.name = "object1";
  o1.object = {Shape::Ellipse, 95, 95, {200, 30, 30}};
  o1.motion.start = {200.0, 150.0};
  o1.motion.velocity = {4.0, 3.0};
  o1.seed = 101;

  // 2:1 rectangle, ~3.8 %.
  SceneSpec o2 = base;
  o2.name = "object2";
  o2.object = {Shape::Rect, 152, 77, {200, 30, 30}};
  o2.motion.start = {320.0, 240.0};
  o2.motion.velocity = {6.0, -2.0};
  o2.seed = 202;

  // Small square, ~0.7 %.
  SceneSpec o3 = base;
  o3.name = "object3";
  o3.object = {Shape::Rect, 46, 46, {200, 30, 30}};
  o3.motion.start = {400.0, 300.0};
  o3.motion.velocity = {5.0, 4.0};
  o3.seed = 303;

  return {o1, o2, o3};
}

}  // namespace croptrack
