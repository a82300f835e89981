#include "croptrack/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

namespace croptrack {
namespace {

std::size_t checked_area(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument(fmt::format("{}: dimensions must be positive, got {}x{}", what, width, height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

Frame::Frame(int width, int height, Rgb fill)
    : width_(width), height_(height), data_(checked_area(width, height, "Frame") * 3) {
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  const std::size_t expected = checked_area(width, height, "Frame") * 3;
  if (data_.size() != expected) {
    throw std::invalid_argument(
        fmt::format("Frame: data length {} does not match {}x{}x3 = {}", data_.size(), width, height, expected));
  }
}

Frame Frame::region(const BoundingBox& box) const {
  if (!box.within(width_, height_)) {
    throw std::out_of_range(fmt::format("Frame::region: box ({},{},{},{}) outside {}x{} frame", box.x, box.y, box.w,
                                        box.h, width_, height_));
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(box.w) * box.h * 3);
  const std::size_t row_bytes = static_cast<std::size_t>(box.w) * 3;
  for (int r = 0; r < box.h; ++r) {
    const auto src = data_.begin() + static_cast<std::ptrdiff_t>(index(box.x, box.y + r));
    std::copy_n(src, row_bytes, out.begin() + static_cast<std::ptrdiff_t>(r * row_bytes));
  }
  return {box.w, box.h, std::move(out)};
}

GrayImage::GrayImage(int width, int height, float fill)
    : width_(width), height_(height), data_(checked_area(width, height, "GrayImage"), fill) {
  if (!(fill >= 0.0F && fill <= 1.0F)) {
    throw std::invalid_argument("GrayImage: fill value outside [0,1]");
  }
}

GrayImage::GrayImage(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  const std::size_t expected = checked_area(width, height, "GrayImage");
  if (data_.size() != expected) {
    throw std::invalid_argument(
        fmt::format("GrayImage: data length {} does not match {}x{}", data_.size(), width, height));
  }
  const auto bad = std::find_if(data_.begin(), data_.end(), [](float v) { return !(v >= 0.0F && v <= 1.0F); });
  if (bad != data_.end()) {
    throw std::invalid_argument(fmt::format("GrayImage: value {} at index {} outside [0,1]", *bad,
                                            std::distance(data_.begin(), bad)));
  }
}

BinaryImage::BinaryImage(int width, int height, bool fill)
    : width_(width), height_(height), data_(checked_area(width, height, "BinaryImage"), fill ? 1 : 0) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  const std::size_t expected = checked_area(width, height, "BinaryImage");
  if (data_.size() != expected) {
    throw std::invalid_argument(
        fmt::format("BinaryImage: data length {} does not match {}x{}", data_.size(), width, height));
  }
  for (auto& v : data_) v = v != 0 ? 1 : 0;
}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

}  // namespace croptrack
