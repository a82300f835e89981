#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "croptrack/image.hpp"

namespace croptrack::testing {

inline constexpr Rgb kRed{200, 30, 30};
inline constexpr Rgb kGray{96, 96, 96};

inline void fill_rect(Frame& f, const BoundingBox& box, Rgb c) {
  for (int y = box.y; y < box.y + box.h; ++y) {
    for (int x = box.x; x < box.x + box.w; ++x) {
      if (x >= 0 && y >= 0 && x < f.width() && y < f.height()) f.set(x, y, c);
    }
  }
}

/// Gray frame with red rectangles.
inline Frame frame_with(int w, int h, const std::vector<BoundingBox>& boxes, Rgb background = kGray) {
  Frame f(w, h, background);
  for (const auto& b : boxes) fill_rect(f, b, kRed);
  return f;
}

// Queue-based 8-connected labelling; blobs as (area, bbox, centroid) tuples.
using BlobKey = std::tuple<long long, int, int, int, int, double, double>;

inline std::multiset<BlobKey> flood_fill_oracle(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::multiset<BlobKey> out;
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.at(x, y) || label[static_cast<std::size_t>(y) * w + x] >= 0) continue;
      std::queue<std::pair<int, int>> q;
      q.push({x, y});
      label[static_cast<std::size_t>(y) * w + x] = next;
      long long area = 0;
      long long sx = 0, sy = 0;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      while (!q.empty()) {
        const auto [cx, cy] = q.front();
        q.pop();
        ++area;
        sx += cx;
        sy += cy;
        x0 = std::min(x0, cx);
        x1 = std::max(x1, cx);
        y0 = std::min(y0, cy);
        y1 = std::max(y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !img.at(nx, ny)) continue;
            auto& l = label[static_cast<std::size_t>(ny) * w + nx];
            if (l >= 0) continue;
            l = next;
            q.push({nx, ny});
          }
        }
      }
      out.insert({area, x0, y0, x1 - x0 + 1, y1 - y0 + 1, static_cast<double>(sx) / area,
                  static_cast<double>(sy) / area});
      ++next;
    }
  }
  return out;
}

}  // namespace croptrack::testing
