#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace croptrack {

/// Sub-pixel image coordinate. Origin is the top-left pixel, x grows right and y grows down.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Axis-aligned pixel rectangle: columns [x, x + w), rows [y, y + h).
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  [[nodiscard]] long long area() const { return static_cast<long long>(w) * h; }
  [[nodiscard]] Point2 center() const { return {x + (w - 1) / 2.0, y + (h - 1) / 2.0}; }
  /// Inclusive of the outermost pixel centres.
  [[nodiscard]] bool contains(Point2 p) const {
    return p.x >= x && p.x <= x + w - 1 && p.y >= y && p.y <= y + h - 1;
  }
  [[nodiscard]] bool within(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// 8-bit RGB raster, row-major, three bytes per pixel.
class Frame {
 public:
  Frame(int width, int height, Rgb fill = {});
  Frame(int width, int height, std::vector<std::uint8_t> data);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::span<const std::uint8_t> data() const { return data_; }
  [[nodiscard]] std::span<std::uint8_t> data() { return data_; }

  [[nodiscard]] Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  /// Copies the given region, which must lie within the frame.
  [[nodiscard]] Frame region(const BoundingBox& box) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  [[nodiscard]] std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// Single-channel intensities in [0, 1], row-major.
class GrayImage {
 public:
  GrayImage(int width, int height, float fill = 0.0F);
  GrayImage(int width, int height, std::vector<float> data);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::span<const float> data() const { return data_; }
  [[nodiscard]] float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<float> data_;
};

class BinaryImage {
 public:
  BinaryImage(int width, int height, bool fill = false);
  BinaryImage(int width, int height, std::vector<std::uint8_t> data);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::span<const std::uint8_t> data() const { return data_; }
  [[nodiscard]] bool at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  [[nodiscard]] std::size_t count() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

}  // namespace croptrack
