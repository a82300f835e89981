#pragma once

#include <optional>
#include <vector>

#include "croptrack/image.hpp"

namespace croptrack {

/// Default red-segmentation threshold applied to the red-minus-gray image.
inline constexpr double kDefaultThreshold = 0.25;
inline constexpr int kDefaultMedianRadius = 1;

/// Maximal 8-connected component of foreground pixels.
struct Blob {
  long long area = 0;
  BoundingBox bbox;
  Point2 centroid;
};

struct Detection {
  BoundingBox bbox;
  /// Mean of member pixel coordinates; this is the reported object centre.
  Point2 centroid;
  Point2 bbox_center;
  long long area = 0;
};

/// Red channel minus luma (0.299 R + 0.587 G + 0.114 B), both scaled to [0,1], clamped to [0,1].
[[nodiscard]] double red_difference(Rgb c);
[[nodiscard]] GrayImage red_difference(const Frame& frame);

/// Median over the (2r+1)^2 neighbourhood with edge replication. radius >= 1.
[[nodiscard]] GrayImage median_filter(const GrayImage& img, int radius = kDefaultMedianRadius);

/// Pixel is set iff its value is strictly greater than t.
[[nodiscard]] BinaryImage threshold(const GrayImage& img, double t);

/// Median filter of a binary image (majority vote over the (2r+1)^2 neighbourhood, edges replicated).
/// For any t, threshold(median_filter(g, r), t) == binary_median_filter(threshold(g, t), r), because the
/// median of an odd-sized window exceeds t exactly when most of its values do.
[[nodiscard]] BinaryImage binary_median_filter(const BinaryImage& img, int radius = kDefaultMedianRadius);

/// Pixels whose red difference is strictly above t; equals threshold(red_difference(frame), t).
[[nodiscard]] BinaryImage segment_red(const Frame& frame, double t);

/// One blob per 8-connected component, in row-major order of each component's first pixel.
[[nodiscard]] std::vector<Blob> connected_components(const BinaryImage& img);

/// Largest blob; ties go to the smallest bbox top-left corner (row first, then column).
[[nodiscard]] std::optional<Blob> largest_blob(const std::vector<Blob>& blobs);

/// Full colour-segmentation pipeline: red difference, median, threshold, blob analysis.
/// Evaluated as segment_red followed by binary_median_filter, which yields the same mask.
[[nodiscard]] std::optional<Detection> detect_object(const Frame& frame, double t = kDefaultThreshold,
                                                     int radius = kDefaultMedianRadius);

}  // namespace croptrack
