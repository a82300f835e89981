#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "croptrack/config.hpp"
#include "croptrack/csv.hpp"
#include "croptrack/ppm.hpp"
#include "croptrack/scene_io.hpp"
#include "croptrack/serialize.hpp"
#include "croptrack/sweep.hpp"

namespace croptrack {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / fmt_dir(tag)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  static std::string fmt_dir(const std::string& tag) {
    return "croptrack_test_" + tag + "_" + std::to_string(std::random_device{}());
  }
  fs::path path_;
};

TEST(Ppm, RoundTrip) {
  std::mt19937 rng(1);
  Frame f(7, 5);
  for (auto& v : f.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
  std::stringstream ss;
  write_ppm(ss, f);
  EXPECT_EQ(ss.str().rfind("P6\n7 5\n255\n", 0), 0U);
  EXPECT_EQ(read_ppm(ss), f);
}

TEST(Ppm, CommentsAndMaxval) {
  std::string data = "P6\n# a comment\n2 1 # trailing\n15\n";
  data += std::string{static_cast<char>(15), 0, 5, 0, 15, 15};
  std::istringstream in(data);
  const auto f = read_ppm(in);
  EXPECT_EQ(f.at(0, 0), (Rgb{255, 0, 85}));
  EXPECT_EQ(f.at(1, 0), (Rgb{0, 255, 255}));
}

TEST(Ppm, RejectsMalformed) {
  std::istringstream p3("P3\n1 1\n255\n0 0 0\n");
  EXPECT_THROW((void)read_ppm(p3), std::runtime_error);
  std::istringstream truncated("P6\n2 2\n255\nabc");
  EXPECT_THROW((void)read_ppm(truncated), std::runtime_error);
  std::istringstream bad_max("P6\n1 1\n65535\n");
  EXPECT_THROW((void)read_ppm(bad_max), std::runtime_error);
  EXPECT_THROW((void)read_ppm(fs::path("/nonexistent/frame.ppm")), std::runtime_error);
}

TEST(Csv, QuotingRoundTrip) {
  std::mt19937 rng(3);
  const std::string alphabet = "ab,\"\n\r x1";
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> fields(1 + rng() % 4);
    for (auto& f : fields) {
      const std::size_t n = rng() % 6;
      for (std::size_t i = 0; i < n; ++i) f += alphabet[rng() % alphabet.size()];
    }
    std::stringstream ss;
    write_csv_row(ss, fields);
    const auto t = read_csv(ss);
    ASSERT_EQ(t.header, fields) << "trial " << trial;
  }
}

TEST(Csv, CrlfAndColumns) {
  std::istringstream in("a,b\r\n1,\"x,y\"\r\n\r\n2,3\r\n");
  const auto t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 2U);
  EXPECT_EQ(t.rows[0][1], "x,y");
  EXPECT_EQ(t.column("b"), 1U);
  EXPECT_THROW((void)t.column("c"), std::out_of_range);
}

TEST(Csv, RejectsRaggedAndUnterminated) {
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW((void)read_csv(ragged), std::runtime_error);
  std::istringstream open("a\n\"abc\n");
  EXPECT_THROW((void)read_csv(open), std::runtime_error);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(fmt_num(0.0), "0");
  EXPECT_EQ(fmt_num(2.163729), "2.16373");
  EXPECT_EQ(fmt_num(307200.0), "307200");
  EXPECT_EQ(fmt_num(-0.5457), "-0.5457");
  EXPECT_DOUBLE_EQ(parse_double(" 1.5 ", "x"), 1.5);
  EXPECT_THROW((void)parse_double("1.5abc", "x"), std::invalid_argument);
  EXPECT_THROW((void)parse_double("inf", "x"), std::invalid_argument);
  EXPECT_THROW((void)parse_double("", "x"), std::invalid_argument);
}

TEST(Config, SceneKeysRoundTrip) {
  SceneSpec spec;
  spec.name = "custom";
  spec.frame_width = 320;
  spec.frame_height = 200;
  spec.n_frames = 17;
  spec.object = {Shape::Ellipse, 30, 12, {220, 20, 40}};
  spec.motion = {{100, 80}, {2.5, -1}, 0.75, false};
  spec.clutter.n_distractors = 3;
  spec.clutter.colors = {{10, 20, 30}, {90, 90, 90}};
  spec.background = {50, 60, 70};
  spec.noise_sigma = 2.5;
  spec.seed = 12345678901ULL;
  spec.occlusion = {4, 2};

  std::istringstream in(format_scene_config(spec));
  SceneSpec back;
  apply_scene_config(parse_key_values(in), back);
  EXPECT_EQ(format_scene_config(back), format_scene_config(spec));
  EXPECT_EQ(back.seed, spec.seed);
  EXPECT_EQ(back.clutter.colors, spec.clutter.colors);
  EXPECT_EQ(back.object.shape, Shape::Ellipse);
}

TEST(Config, CommentsAndErrors) {
  std::istringstream in("# comment\n\n  threshold = 0.3 \nkalman.q=0.5\n");
  TrackerConfig cfg;
  apply_tracker_config(parse_key_values(in), cfg);
  EXPECT_DOUBLE_EQ(cfg.detect_threshold, 0.3);
  EXPECT_DOUBLE_EQ(cfg.kalman.process, 0.5);

  std::istringstream no_eq("threshold 0.3\n");
  EXPECT_THROW((void)parse_key_values(no_eq), std::invalid_argument);
  EXPECT_THROW(apply_tracker_config({{"bogus", "1"}}, cfg), std::invalid_argument);
  SceneSpec spec;
  EXPECT_THROW(apply_scene_config({{"object.shape", "triangle"}}, spec), std::invalid_argument);
  EXPECT_THROW(apply_scene_config({{"object.size", "10"}}, spec), std::invalid_argument);
  EXPECT_THROW(apply_scene_config({{"object.color", "300,0,0"}}, spec), std::invalid_argument);
  EXPECT_THROW(apply_scene_config({{"motion.bounce", "maybe"}}, spec), std::invalid_argument);
}

TEST(SceneIo, WriteReadRoundTrip) {
  TempDir dir("scene");
  SceneSpec spec;
  spec.frame_width = 64;
  spec.frame_height = 48;
  spec.n_frames = 5;
  spec.object.width = 10;
  spec.object.height = 8;
  spec.motion.start = {20.25, 20.5};
  spec.motion.velocity = {1.5, 1};
  const auto scene = generate_scene(spec);
  write_scene(dir.path(), scene);
  EXPECT_TRUE(fs::exists(dir.path() / "frame_000004.ppm"));
  const auto back = read_scene(dir.path());
  EXPECT_EQ(back.frames, scene.frames);
  ASSERT_EQ(back.truth.size(), scene.truth.size());
  for (std::size_t i = 0; i < back.truth.size(); ++i) {
    EXPECT_NEAR(back.truth[i].x, scene.truth[i].x, 1e-4);
    EXPECT_NEAR(back.truth[i].y, scene.truth[i].y, 1e-4);
  }
}

TEST(SceneIo, MissingTruthAndErrors) {
  TempDir dir("noproof");
  write_ppm(dir.path() / "a.ppm", Frame(4, 4));
  write_ppm(dir.path() / "b.ppm", Frame(4, 4));
  const auto scene = read_scene(dir.path());
  EXPECT_EQ(scene.frames.size(), 2U);
  EXPECT_TRUE(scene.truth.empty());

  std::ofstream(dir.path() / "truth.csv") << "frame_index,x,y\n0,1,1\n";
  EXPECT_THROW((void)read_scene(dir.path()), std::runtime_error);
  EXPECT_THROW((void)read_scene(dir.path() / "missing"), std::runtime_error);
}

TEST(Serialize, TrackCsvAndJson) {
  TrackResult r;
  r.window_side = 40;
  TrackRecord hit;
  hit.frame_index = 1;
  hit.predicted_center = {10, 11};
  hit.detected_center = Point2{10.5, 11.25};
  hit.corrected_center = {10.4, 11.2};
  hit.pixels_processed = 1600;
  TrackRecord miss = hit;
  miss.frame_index = 2;
  miss.detected_center.reset();
  r.records = {hit, miss};
  r.success_rate = 0.5;

  std::ostringstream out;
  write_track_csv(out, r);
  std::istringstream in(out.str());
  const auto t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"frame_index", "pred_x", "pred_y", "det_x", "det_y", "corr_x",
                                                 "corr_y", "pixels", "elapsed_s"}));
  ASSERT_EQ(t.rows.size(), 2U);
  EXPECT_EQ(t.rows[0][3], "10.5");
  EXPECT_EQ(t.rows[1][3], "");
  EXPECT_EQ(t.rows[1][7], "1600");

  const auto j = to_json(r);
  EXPECT_EQ(j.at("window_side"), 40);
  EXPECT_EQ(j.at("records").size(), 2U);
}

TEST(Serialize, Sig6) {
  EXPECT_DOUBLE_EQ(sig6(2.1637291), 2.16373);
  EXPECT_DOUBLE_EQ(sig6(0.0), 0.0);
  EXPECT_DOUBLE_EQ(sig6(-123456789.0), -123457000.0);
}

TEST(Serialize, SweepCsvReadBack) {
  TempDir dir("sweep");
  ObjectSweep obj{"o,1", {}, std::nullopt};
  for (double m : {0.5, 1.0, 1.5}) {
    SweepPoint p;
    p.window_multiple = m;
    p.mean_pixels = 100 * m * m;
    p.mean_distance_error = 3.0 / m;
    p.success_rate = 1.0;
    p.trials_ok = 5;
    obj.points.push_back(p);
  }
  SweepPoint ff;
  ff.mean_pixels = 307200;
  ff.success_rate = 1;
  ff.trials_ok = 5;
  obj.full_frame = ff;
  {
    std::ofstream s(dir.path() / "sweep.csv");
    write_sweep_csv(s, {obj});
    std::ofstream f(dir.path() / "full_frame.csv");
    write_full_frame_csv(f, {obj});
  }
  const auto back = read_sweep_csv(dir.path() / "sweep.csv", dir.path() / "full_frame.csv");
  ASSERT_EQ(back.size(), 1U);
  EXPECT_EQ(back[0].name, "o,1");
  ASSERT_EQ(back[0].points.size(), 3U);
  EXPECT_DOUBLE_EQ(back[0].points[1].mean_pixels, 100.0);
  EXPECT_DOUBLE_EQ(back[0].points[2].mean_distance_error, 2.0);
  EXPECT_EQ(back[0].points[0].trials_ok, 5);
  ASSERT_TRUE(back[0].full_frame);
  EXPECT_DOUBLE_EQ(back[0].full_frame->mean_pixels, 307200.0);
}

TEST(Serialize, ReportJsonShape) {
  SweepReport report;
  CurveFit fit;
  fit.name = "pooled";
  fit.cost_model = PolyModel{{1, 2, 3, 4, 5, 6}};
  fit.error_model = ExpModel{1.31, -0.5457};
  fit.intersection = Intersection{2.16, 0.4};
  fit.argmin = Minimum{3.0, 0.1};
  report.pooled = fit;
  const auto j = to_json(report);
  EXPECT_EQ(j.at("cost_metric"), "pixels_processed");
  EXPECT_EQ(j.at("optimum").at("headline"), "intersection");
  EXPECT_TRUE(j.at("optimum").contains("intersection"));
  EXPECT_TRUE(j.at("optimum").contains("argmin"));
  EXPECT_EQ(j.at("pooled").at("cost_model").at("coeffs").size(), 6U);
}

}  // namespace
}  // namespace croptrack
