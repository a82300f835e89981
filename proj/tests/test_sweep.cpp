#include "croptrack/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace croptrack {
namespace {

SceneSpec small_object(const std::string& name, int w, int h, Point2 v, std::uint64_t seed) {
  SceneSpec s;
  s.name = name;
  s.frame_width = 200;
  s.frame_height = 150;
  s.n_frames = 40;
  s.object.width = w;
  s.object.height = h;
  s.motion.start = {100, 75};
  s.motion.velocity = v;
  s.motion.jitter_sigma = 0.5;
  s.clutter.n_distractors = 2;
  s.noise_sigma = 3.0;
  s.seed = seed;
  return s;
}

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.multiples = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 9.0};
  cfg.trials = 2;
  cfg.tracker.measure_time = false;
  cfg.threads = 1;
  return cfg;
}

std::vector<SweepObject> small_objects() {
  return {SweepObject::from_spec(small_object("a", 20, 20, {3, 2}, 1)),
          SweepObject::from_spec(small_object("b", 30, 15, {-2, 3}, 2))};
}

TEST(DefaultMultiples, HalfStepGrid) {
  const auto m = default_multiples();
  ASSERT_EQ(m.size(), 19U);
  EXPECT_EQ(m.front(), 0.5);
  EXPECT_EQ(m.back(), 9.5);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_DOUBLE_EQ(m[i] - m[i - 1], 0.5);
}

TEST(Sweep, SmallSweepShapesAndTrends) {
  const auto report = sweep(small_objects(), small_config());
  ASSERT_EQ(report.objects.size(), 2U);
  ASSERT_EQ(report.per_object.size(), 2U);
  for (const auto& obj : report.objects) {
    ASSERT_EQ(obj.points.size(), 8U);
    ASSERT_TRUE(obj.full_frame);
    EXPECT_EQ(obj.full_frame->success_rate, 1.0);
    EXPECT_DOUBLE_EQ(obj.full_frame->mean_pixels, 200.0 * 150.0);
    for (std::size_t i = 0; i < obj.points.size(); ++i) {
      const auto& p = obj.points[i];
      EXPECT_EQ(p.trials_ok, 2);
      EXPECT_EQ(p.trials_failed, 0);
      EXPECT_GE(p.success_rate, 0.0);
      EXPECT_LE(p.success_rate, 1.0);
      EXPECT_LE(p.mean_pixels, obj.full_frame->mean_pixels);
      if (p.window_multiple >= 1.5) EXPECT_EQ(p.success_rate, 1.0) << obj.name << " " << p.window_multiple;
      if (i > 0) {
        const auto& prev = obj.points[i - 1];
        EXPECT_GE(p.mean_pixels, prev.mean_pixels);
        if (prev.mean_pixels < 200.0 * 150.0) EXPECT_GT(p.mean_pixels, prev.mean_pixels);
      }
    }
  }
  for (const auto& fit : report.per_object) {
    ASSERT_TRUE(fit.cost_model) << fit.note;
    ASSERT_TRUE(fit.error_model) << fit.note;
    EXPECT_EQ(fit.cost_model->coeffs.size(), 6U);
    EXPECT_TRUE(fit.norm_time.empty());
    EXPECT_FALSE(fit.time_model);
    ASSERT_TRUE(fit.argmin);
  }
  EXPECT_EQ(report.pooled.multiples.size(), 8U);
  ASSERT_TRUE(report.pooled.cost_model);
  ASSERT_TRUE(report.pooled.error_model);
  EXPECT_LT(report.pooled.error_model->b, 0.0);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  auto cfg = small_config();
  const auto one = run_sweep(small_objects(), cfg);
  cfg.threads = 4;
  const auto four = run_sweep(small_objects(), cfg);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t o = 0; o < one.size(); ++o) {
    for (std::size_t i = 0; i < one[o].points.size(); ++i) {
      EXPECT_EQ(one[o].points[i].mean_pixels, four[o].points[i].mean_pixels);
      EXPECT_EQ(one[o].points[i].mean_distance_error, four[o].points[i].mean_distance_error);
      EXPECT_EQ(one[o].points[i].success_rate, four[o].points[i].success_rate);
    }
  }
}

TEST(Sweep, TrialsUseDistinctSeeds) {
  auto cfg = small_config();
  cfg.multiples = {2.0};
  cfg.include_full_frame = false;
  cfg.trials = 1;
  const auto objs = small_objects();
  const auto a = run_sweep({objs[0]}, cfg);
  cfg.trials = 2;
  const auto b = run_sweep({objs[0]}, cfg);
  EXPECT_NE(a[0].points[0].mean_distance_error, b[0].points[0].mean_distance_error);
}

TEST(Sweep, FailedCellsAreRecorded) {
  auto spec = small_object("hidden", 20, 20, {3, 2}, 5);
  spec.occlusion = {0, spec.n_frames};
  auto cfg = small_config();
  cfg.tracker.max_init_frames = 5;
  const auto report = sweep({SweepObject::from_spec(spec), small_objects()[0]}, cfg);
  for (const auto& p : report.objects[0].points) {
    EXPECT_FALSE(p.ok());
    EXPECT_EQ(p.trials_failed, 2);
    EXPECT_NE(p.failure.find("not detected"), std::string::npos);
  }
  EXPECT_FALSE(report.per_object[0].cost_model);
  EXPECT_FALSE(report.per_object[0].note.empty());
  for (const auto& p : report.objects[1].points) EXPECT_TRUE(p.ok());
  // No multiple was completed by both objects.
  EXPECT_TRUE(report.pooled.multiples.empty());
  EXPECT_FALSE(report.pooled.cost_model);
}

TEST(Sweep, InvalidSpecFailsCellsNotSweep) {
  auto spec = small_object("bad", 20, 20, {3, 2}, 5);
  spec.object.color = {0, 255, 0};
  const auto objs = run_sweep({SweepObject::from_spec(spec)}, small_config());
  for (const auto& p : objs[0].points) EXPECT_NE(p.failure.find("object.color"), std::string::npos);
}

TEST(Sweep, RejectsInvalidConfig) {
  auto cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW((void)run_sweep(small_objects(), cfg), std::invalid_argument);
  cfg = small_config();
  cfg.multiples = {1.0, -2.0};
  EXPECT_THROW((void)run_sweep(small_objects(), cfg), std::invalid_argument);
}

TEST(Sweep, SceneObjectsReuseFootage) {
  auto cfg = small_config();
  cfg.trials = 3;
  const auto scene = generate_scene(small_object("a", 20, 20, {3, 2}, 1));
  const auto objs = run_sweep({SweepObject::from_scene("footage", scene)}, cfg);
  EXPECT_EQ(objs[0].name, "footage");
  for (const auto& p : objs[0].points) EXPECT_EQ(p.trials_ok, 3);
}

TEST(FitPooled, AveragesPerObjectNormalizedCurves) {
  ObjectSweep a{"a", {}, std::nullopt};
  ObjectSweep b{"b", {}, std::nullopt};
  const std::vector<double> ms{1, 2, 3, 4, 5, 6, 7};
  for (double m : ms) {
    SweepPoint p;
    p.window_multiple = m;
    p.trials_ok = 1;
    p.mean_pixels = m * m;
    p.mean_distance_error = 10.0 * std::exp(-m);
    a.points.push_back(p);
    p.mean_pixels = 100.0 * m;
    p.mean_distance_error = 5.0 * std::exp(-0.5 * m);
    b.points.push_back(p);
  }
  const auto pooled = fit_pooled({a, b}, AnalysisConfig{});
  ASSERT_EQ(pooled.multiples, ms);
  const std::vector<double> pa{1, 4, 9, 16, 25, 36, 49};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double na = (pa[i] - 1.0) / 48.0;
    const double nb = (ms[i] - 1.0) / 6.0;
    EXPECT_NEAR(pooled.norm_cost[i], 0.5 * (na + nb), 1e-12);
  }
  EXPECT_EQ(pooled.norm_error.front(), 1.0);
  EXPECT_EQ(pooled.norm_error.back(), 0.0);
  ASSERT_TRUE(pooled.cost_model);
  ASSERT_TRUE(pooled.intersection);
}

TEST(FitCurves, ConstantErrorIsNotedNotThrown) {
  ObjectSweep a{"flat", {}, std::nullopt};
  for (double m : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
    SweepPoint p;
    p.window_multiple = m;
    p.trials_ok = 1;
    p.mean_pixels = m * m;
    p.mean_distance_error = 2.0;
    a.points.push_back(p);
  }
  const auto fit = fit_curves(a, AnalysisConfig{});
  EXPECT_TRUE(fit.cost_model);
  EXPECT_FALSE(fit.error_model);
  EXPECT_NE(fit.note.find("error"), std::string::npos);
}

}  // namespace
}  // namespace croptrack
