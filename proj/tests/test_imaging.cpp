#include "croptrack/imaging.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "test_util.hpp"

namespace croptrack {
namespace {

using testing::BlobKey;
using testing::flood_fill_oracle;
using testing::frame_with;

GrayImage random_gray(std::mt19937& rng, int w, int h, int levels) {
  std::uniform_int_distribution<int> pick(0, levels);
  std::vector<float> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = static_cast<float>(pick(rng)) / static_cast<float>(levels);
  return {w, h, std::move(v)};
}

BinaryImage random_binary(std::mt19937& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  BinaryImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, on(rng));
  }
  return img;
}

// Brute-force median: gather the replicated neighbourhood, sort, take the middle.
GrayImage median_oracle(const GrayImage& img, int r) {
  std::vector<float> out;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      std::vector<float> nb;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          nb.push_back(img.at(std::clamp(x + dx, 0, img.width() - 1), std::clamp(y + dy, 0, img.height() - 1)));
        }
      }
      std::sort(nb.begin(), nb.end());
      out.push_back(nb[nb.size() / 2]);
    }
  }
  return {img.width(), img.height(), std::move(out)};
}

TEST(ImageTypes, RejectInvalidDimensionsAndData) {
  EXPECT_THROW(Frame(0, 3), std::invalid_argument);
  EXPECT_THROW(Frame(2, 2, std::vector<std::uint8_t>(11)), std::invalid_argument);
  EXPECT_THROW(GrayImage(1, 1, std::vector<float>{1.5F}), std::invalid_argument);
  EXPECT_THROW(BinaryImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
  EXPECT_NO_THROW(GrayImage(1, 2, std::vector<float>{0.0F, 1.0F}));
}

TEST(RedDifference, PrimaryColors) {
  EXPECT_NEAR(red_difference(Rgb{255, 0, 0}), 0.701, 1e-6);
  EXPECT_EQ(red_difference(Rgb{255, 255, 255}), 0.0);
  EXPECT_EQ(red_difference(Rgb{0, 255, 0}), 0.0);
  EXPECT_EQ(red_difference(Rgb{0, 0, 0}), 0.0);
}

TEST(RedDifference, OutputStaysInUnitIntervalOnRandomFrames) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 50; ++trial) {
    Frame f(17, 9);
    for (auto& v : f.data()) v = static_cast<std::uint8_t>(byte(rng));
    const auto g = red_difference(f);
    ASSERT_EQ(g.width(), 17);
    ASSERT_EQ(g.height(), 9);
    for (float v : g.data()) {
      ASSERT_GE(v, 0.0F);
      ASSERT_LE(v, 1.0F);
    }
  }
}

TEST(MedianFilter, ConstantImageIsFixedPoint) {
  const GrayImage img(6, 4, 0.3F);
  EXPECT_EQ(median_filter(img, 1), img);
  EXPECT_EQ(median_filter(img, 2), img);
}

TEST(MedianFilter, RemovesSingleOutlier) {
  std::vector<float> v(9, 0.0F);
  v[4] = 1.0F;
  const auto out = median_filter(GrayImage(3, 3, v), 1);
  EXPECT_EQ(out, GrayImage(3, 3, 0.0F));
}

TEST(MedianFilter, SinglePixelUnchanged) {
  const GrayImage img(1, 1, std::vector<float>{0.42F});
  EXPECT_EQ(median_filter(img, 1), img);
}

TEST(MedianFilter, RejectsZeroRadius) { EXPECT_THROW((void)median_filter(GrayImage(2, 2), 0), std::invalid_argument); }

TEST(MedianFilter, MatchesBruteForceAndDrawsFromInputValues) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + trial % 3;
    const auto img = random_gray(rng, dim(rng), dim(rng), 20);
    const auto out = median_filter(img, r);
    ASSERT_EQ(out, median_oracle(img, r)) << "trial " << trial << " radius " << r;
    const std::set<float> values(img.data().begin(), img.data().end());
    for (float v : out.data()) ASSERT_TRUE(values.count(v));
  }
}

TEST(Threshold, StrictComparison) {
  const GrayImage img(3, 1, std::vector<float>{0.701F, 0.25F, 0.0F});
  const auto out = threshold(img, 0.25);
  EXPECT_TRUE(out.at(0, 0));
  EXPECT_FALSE(out.at(1, 0));
  EXPECT_FALSE(out.at(2, 0));
  EXPECT_EQ(threshold(GrayImage(4, 4, 0.0F), 0.25), BinaryImage(4, 4, false));
  EXPECT_THROW((void)threshold(img, 1.5), std::invalid_argument);
}

TEST(Threshold, ExtremeLevels) {
  std::mt19937 rng(3);
  const auto img = random_gray(rng, 10, 10, 4);
  const auto zero = threshold(img, 0.0);
  const auto one = threshold(img, 1.0);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      EXPECT_EQ(zero.at(x, y), img.at(x, y) > 0.0F);
      EXPECT_FALSE(one.at(x, y));
    }
  }
}

TEST(BinaryMedian, EquivalentToMedianThenThreshold) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dim(1, 14);
  std::uniform_real_distribution<double> level(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = 1 + trial % 3;
    const auto img = random_gray(rng, dim(rng), dim(rng), 10);
    const double t = trial % 5 == 0 ? 0.5 : level(rng);
    ASSERT_EQ(threshold(median_filter(img, r), t), binary_median_filter(threshold(img, t), r))
        << "trial " << trial;
  }
}

TEST(SegmentRed, EqualsThresholdedRedDifference) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> byte(0, 255);
  for (double t : {0.0, 0.1, 0.25, 0.467, 0.701, 1.0}) {
    Frame f(32, 32);
    for (auto& v : f.data()) v = static_cast<std::uint8_t>(byte(rng));
    // Include the exact-threshold colours.
    f.set(0, 0, {255, 0, 0});
    f.set(1, 0, {200, 30, 30});
    ASSERT_EQ(segment_red(f, t), threshold(red_difference(f), t)) << "t = " << t;
  }
}

TEST(ConnectedComponents, SinglePixel) {
  BinaryImage img(8, 8);
  img.set(3, 5, true);
  const auto blobs = connected_components(img);
  ASSERT_EQ(blobs.size(), 1U);
  EXPECT_EQ(blobs[0].area, 1);
  EXPECT_EQ(blobs[0].bbox, (BoundingBox{3, 5, 1, 1}));
  EXPECT_EQ(blobs[0].centroid, (Point2{3, 5}));
}

TEST(ConnectedComponents, DiagonalNeighboursJoin) {
  BinaryImage img(4, 4);
  img.set(1, 1, true);
  img.set(2, 2, true);
  const auto blobs = connected_components(img);
  ASSERT_EQ(blobs.size(), 1U);
  EXPECT_EQ(blobs[0].area, 2);
}

TEST(ConnectedComponents, SolidSquare) {
  BinaryImage img(8, 8);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) img.set(x, y, true);
  }
  const auto blobs = connected_components(img);
  ASSERT_EQ(blobs.size(), 1U);
  EXPECT_EQ(blobs[0].area, 16);
  EXPECT_DOUBLE_EQ(blobs[0].centroid.x, 1.5);
  EXPECT_DOUBLE_EQ(blobs[0].centroid.y, 1.5);
}

TEST(ConnectedComponents, EmptyImage) { EXPECT_TRUE(connected_components(BinaryImage(5, 5)).empty()); }

TEST(ConnectedComponents, MatchesFloodFillOracle) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto img = random_binary(rng, dim(rng), dim(rng), density(rng));
    const auto blobs = connected_components(img);
    std::multiset<BlobKey> got;
    long long total = 0;
    for (const auto& b : blobs) {
      total += b.area;
      ASSERT_GE(b.area, 1);
      ASSERT_LE(b.area, b.bbox.area());
      ASSERT_TRUE(b.bbox.contains(b.centroid));
      ASSERT_TRUE(b.bbox.within(img.width(), img.height()));
      got.insert({b.area, b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h, b.centroid.x, b.centroid.y});
    }
    ASSERT_EQ(total, static_cast<long long>(img.count()));
    ASSERT_EQ(got, flood_fill_oracle(img)) << "trial " << trial;
  }
}

TEST(DetectObject, SingleSquare) {
  const auto f = frame_with(64, 48, {{20, 10, 10, 10}});
  const auto det = detect_object(f);
  ASSERT_TRUE(det);
  EXPECT_EQ(det->bbox, (BoundingBox{20, 10, 10, 10}));
  EXPECT_DOUBLE_EQ(det->centroid.x, 24.5);
  EXPECT_DOUBLE_EQ(det->centroid.y, 14.5);
  EXPECT_EQ(det->bbox_center, det->centroid);
  // The 3x3 median drops the four corner pixels (each sees only 4 of 9 set neighbours).
  EXPECT_EQ(det->area, 96);
}

TEST(DetectObject, BlackFrameHasNoDetection) { EXPECT_FALSE(detect_object(Frame(32, 32, Rgb{0, 0, 0}))); }

TEST(DetectObject, PicksLargestBlob) {
  const auto f = frame_with(64, 48, {{2, 2, 4, 4}, {30, 20, 10, 10}});
  const auto det = detect_object(f);
  ASSERT_TRUE(det);
  EXPECT_EQ(det->bbox, (BoundingBox{30, 20, 10, 10}));
}

TEST(DetectObject, TieGoesToTopmostThenLeftmost) {
  const auto f = frame_with(64, 48, {{40, 5, 6, 6}, {5, 5, 6, 6}, {20, 30, 6, 6}});
  const auto det = detect_object(f);
  ASSERT_TRUE(det);
  EXPECT_EQ(det->bbox, (BoundingBox{5, 5, 6, 6}));
}

TEST(DetectObject, MedianRemovesSpeckle) {
  auto f = frame_with(32, 32, {});
  f.set(10, 10, {255, 0, 0});
  EXPECT_FALSE(detect_object(f));
}

TEST(DetectObject, RandomRectanglesExact) {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> size(3, 40);
    const int w = size(rng);
    const int h = size(rng);
    std::uniform_int_distribution<int> px(0, 120 - w);
    std::uniform_int_distribution<int> py(0, 90 - h);
    const BoundingBox box{px(rng), py(rng), w, h};
    const auto det = detect_object(frame_with(120, 90, {box}));
    ASSERT_TRUE(det);
    ASSERT_EQ(det->bbox, box);
    const auto c = box.center();
    ASSERT_LE(std::abs(det->centroid.x - c.x), 0.5);
    ASSERT_LE(std::abs(det->centroid.y - c.y), 0.5);
  }
}

}  // namespace
}  // namespace croptrack
