#include "croptrack/imaging.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

namespace croptrack {
namespace {

// Luma weights scaled by 1000 keep the subtraction exact in integers: white maps to exactly 0.
constexpr int kLumaR = 299;
constexpr int kLumaG = 587;
constexpr int kLumaB = 114;
constexpr double kScale = 255.0 * 1000.0;

float red_minus_luma(int r, int g, int b) {
  const int num = (1000 - kLumaR) * r - kLumaG * g - kLumaB * b;
  if (num <= 0) return 0.0F;
  return static_cast<float>(std::min(1.0, num / kScale));
}

inline void sort2(float& a, float& b) {
  const float lo = std::min(a, b);
  b = std::max(a, b);
  a = lo;
}

// 19-exchange median-of-nine network; the median ends up in p[4].
inline float median9(float p0, float p1, float p2, float p3, float p4, float p5, float p6, float p7, float p8) {
  sort2(p1, p2); sort2(p4, p5); sort2(p7, p8); sort2(p0, p1); sort2(p3, p4); sort2(p6, p7);
  sort2(p1, p2); sort2(p4, p5); sort2(p7, p8); sort2(p0, p3); sort2(p5, p8); sort2(p4, p7);
  sort2(p3, p6); sort2(p1, p4); sort2(p2, p5); sort2(p4, p7); sort2(p4, p2); sort2(p6, p4);
  sort2(p4, p2);
  return p4;
}

std::vector<float> median3x3(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  const auto src = img.data();
  std::vector<float> out(src.size());
  for (int y = 0; y < h; ++y) {
    const float* up = &src[static_cast<std::size_t>(std::max(y - 1, 0)) * w];
    const float* row = &src[static_cast<std::size_t>(y) * w];
    const float* dn = &src[static_cast<std::size_t>(std::min(y + 1, h - 1)) * w];
    float* dst = &out[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      const int l = x > 0 ? x - 1 : 0;
      const int r = x < w - 1 ? x + 1 : w - 1;
      dst[x] = median9(up[l], up[x], up[r], row[l], row[x], row[r], dn[l], dn[x], dn[r]);
    }
  }
  return out;
}

std::vector<float> median_generic(const GrayImage& img, int radius) {
  const int w = img.width();
  const int h = img.height();
  const auto src = img.data();
  const int k = 2 * radius + 1;
  std::vector<float> out(src.size());
  std::vector<float> window(static_cast<std::size_t>(k) * k);
  const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t n = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -radius; dx <= radius; ++dx) {
          const int xx = std::clamp(x + dx, 0, w - 1);
          window[n++] = src[static_cast<std::size_t>(yy) * w + xx];
        }
      }
      std::nth_element(window.begin(), mid, window.end());
      out[static_cast<std::size_t>(y) * w + x] = *mid;
    }
  }
  return out;
}

BinaryImage binary_median3x3(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  const auto src = img.data();
  std::vector<std::uint8_t> row_sum(src.size());
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = &src[static_cast<std::size_t>(y) * w];
    std::uint8_t* dst = &row_sum[static_cast<std::size_t>(y) * w];
    if (w == 1) {
      dst[0] = static_cast<std::uint8_t>(3 * row[0]);
      continue;
    }
    dst[0] = static_cast<std::uint8_t>(2 * row[0] + row[1]);
    for (int x = 1; x < w - 1; ++x) dst[x] = static_cast<std::uint8_t>(row[x - 1] + row[x] + row[x + 1]);
    dst[w - 1] = static_cast<std::uint8_t>(row[w - 2] + 2 * row[w - 1]);
  }
  std::vector<std::uint8_t> out(src.size());
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* up = &row_sum[static_cast<std::size_t>(std::max(y - 1, 0)) * w];
    const std::uint8_t* mid = &row_sum[static_cast<std::size_t>(y) * w];
    const std::uint8_t* dn = &row_sum[static_cast<std::size_t>(std::min(y + 1, h - 1)) * w];
    std::uint8_t* dst = &out[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) dst[x] = static_cast<std::uint8_t>(up[x] + mid[x] + dn[x] >= 5 ? 1 : 0);
  }
  return {w, h, std::move(out)};
}

}  // namespace

double red_difference(Rgb c) { return red_minus_luma(c.r, c.g, c.b); }

GrayImage red_difference(const Frame& frame) {
  const auto px = frame.data();
  std::vector<float> out(px.size() / 3);
  for (std::size_t i = 0, j = 0; i < out.size(); ++i, j += 3) {
    out[i] = red_minus_luma(px[j], px[j + 1], px[j + 2]);
  }
  return {frame.width(), frame.height(), std::move(out)};
}

GrayImage median_filter(const GrayImage& img, int radius) {
  if (radius < 1) {
    throw std::invalid_argument(fmt::format("median_filter: radius must be >= 1, got {}", radius));
  }
  auto out = radius == 1 ? median3x3(img) : median_generic(img, radius);
  return {img.width(), img.height(), std::move(out)};
}

BinaryImage threshold(const GrayImage& img, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument(fmt::format("threshold: level {} outside [0,1]", t));
  }
  const auto src = img.data();
  std::vector<std::uint8_t> out(src.size());
  std::transform(src.begin(), src.end(), out.begin(),
                 [t](float v) { return static_cast<std::uint8_t>(static_cast<double>(v) > t ? 1 : 0); });
  return {img.width(), img.height(), std::move(out)};
}

BinaryImage binary_median_filter(const BinaryImage& img, int radius) {
  if (radius < 1 || radius > 127) {
    throw std::invalid_argument(fmt::format("binary_median_filter: radius must be in [1, 127], got {}", radius));
  }
  const int w = img.width();
  const int h = img.height();
  const auto src = img.data();
  if (radius == 1) return binary_median3x3(img);
  const int k = 2 * radius + 1;
  const int majority = (k * k + 1) / 2;

  // Separable box count with replicated edges; k*k <= 65025 fits in 16 bits.
  std::vector<std::uint16_t> row_sum(src.size());
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = &src[static_cast<std::size_t>(y) * w];
    std::uint16_t* dst = &row_sum[static_cast<std::size_t>(y) * w];
    const auto clamped_sum = [&](int x) {
      int s = 0;
      for (int dx = -radius; dx <= radius; ++dx) s += row[std::clamp(x + dx, 0, w - 1)];
      return static_cast<std::uint16_t>(s);
    };
    const int interior_end = std::max(radius, w - radius);
    for (int x = 0; x < std::min(radius, w); ++x) dst[x] = clamped_sum(x);
    for (int x = radius; x < interior_end; ++x) {
      std::uint16_t s = 0;
      for (int dx = -radius; dx <= radius; ++dx) s = static_cast<std::uint16_t>(s + row[x + dx]);
      dst[x] = s;
    }
    for (int x = std::max(interior_end, std::min(radius, w)); x < w; ++x) dst[x] = clamped_sum(x);
  }

  std::vector<std::uint8_t> out(src.size());
  std::vector<std::uint16_t> count(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    std::fill(count.begin(), count.end(), std::uint16_t{0});
    for (int dy = -radius; dy <= radius; ++dy) {
      const std::uint16_t* rs = &row_sum[static_cast<std::size_t>(std::clamp(y + dy, 0, h - 1)) * w];
      for (int x = 0; x < w; ++x) count[x] = static_cast<std::uint16_t>(count[x] + rs[x]);
    }
    std::uint8_t* dst = &out[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) dst[x] = count[x] >= majority ? 1 : 0;
  }
  return {w, h, std::move(out)};
}

BinaryImage segment_red(const Frame& frame, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument(fmt::format("segment_red: level {} outside [0,1]", t));
  }
  // red_minus_luma is non-decreasing in the integer numerator, so "value > t" is "numerator >= cutoff".
  const int max_num = (1000 - kLumaR) * 255;
  int lo = 1;
  int hi = max_num + 1;  // hi: smallest numerator known to pass (max_num + 1 means none does)
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (static_cast<double>(static_cast<float>(std::min(1.0, mid / kScale))) > t) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const int cutoff = hi;

  const auto px = frame.data();
  std::vector<std::uint8_t> out(px.size() / 3);
  for (std::size_t i = 0, j = 0; i < out.size(); ++i, j += 3) {
    const int num = (1000 - kLumaR) * px[j] - kLumaG * px[j + 1] - kLumaB * px[j + 2];
    out[i] = num >= cutoff ? 1 : 0;
  }
  return {frame.width(), frame.height(), std::move(out)};
}

std::vector<Blob> connected_components(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  // Pixels are cleared from the work copy as they are claimed by a blob.
  std::vector<std::uint8_t> open(img.data().begin(), img.data().end());
  std::vector<int> stack;
  std::vector<Blob> blobs;

  const std::uint8_t* base = open.data();
  const std::uint8_t* const end = base + open.size();
  for (const std::uint8_t* p = base; p < end; ++p) {
    p = static_cast<const std::uint8_t*>(std::memchr(p, 1, static_cast<std::size_t>(end - p)));
    if (p == nullptr) break;
    const auto s = static_cast<int>(p - base);
    const int sx = s % w;
    const int sy = s / w;

    long long area = 0;
    double sum_x = 0.0;
    double sum_y = 0.0;
    int min_x = sx, max_x = sx, min_y = sy, max_y = sy;
    open[static_cast<std::size_t>(s)] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      const int q = stack.back();
      stack.pop_back();
      const int x = q % w;
      const int y = q / w;
      ++area;
      sum_x += x;
      sum_y += y;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      for (int ny = std::max(y - 1, 0); ny <= std::min(y + 1, h - 1); ++ny) {
        for (int nx = std::max(x - 1, 0); nx <= std::min(x + 1, w - 1); ++nx) {
          const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
          if (open[n] != 0) {
            open[n] = 0;
            stack.push_back(static_cast<int>(n));
          }
        }
      }
    }
    blobs.push_back({area,
                     {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1},
                     {sum_x / static_cast<double>(area), sum_y / static_cast<double>(area)}});
  }
  return blobs;
}

std::optional<Blob> largest_blob(const std::vector<Blob>& blobs) {
  const auto better = [](const Blob& a, const Blob& b) {
    if (a.area != b.area) return a.area > b.area;
    if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
    return a.bbox.x < b.bbox.x;
  };
  const Blob* best = nullptr;
  for (const auto& b : blobs) {
    if (best == nullptr || better(b, *best)) best = &b;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::optional<Detection> detect_object(const Frame& frame, double t, int radius) {
  const auto mask = binary_median_filter(segment_red(frame, t), radius);
  const auto best = largest_blob(connected_components(mask));
  if (!best) return std::nullopt;
  return Detection{best->bbox, best->centroid, best->bbox.center(), best->area};
}

}  // namespace croptrack
