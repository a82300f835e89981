#include "croptrack/scene_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "croptrack/csv.hpp"
#include "croptrack/ppm.hpp"

namespace croptrack {

void write_scene(const std::filesystem::path& dir, const Scene& scene) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < scene.frames.size(); ++i) {
    write_ppm(dir / fmt::format("frame_{:06d}.ppm", i), scene.frames[i]);
  }
  std::ofstream truth(dir / "truth.csv", std::ios::binary);
  if (!truth) throw std::runtime_error(fmt::format("cannot create {}", (dir / "truth.csv").string()));
  write_csv_row(truth, {"frame_index", "x", "y"});
  for (std::size_t i = 0; i < scene.truth.size(); ++i) {
    write_csv_row(truth, {std::to_string(i), fmt_num(scene.truth[i].x), fmt_num(scene.truth[i].y)});
  }
}

Scene read_scene(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error(fmt::format("scene directory {} does not exist", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
  }
  if (files.empty()) throw std::runtime_error(fmt::format("no .ppm frames in {}", dir.string()));
  std::sort(files.begin(), files.end());

  Scene scene;
  for (const auto& f : files) scene.frames.push_back(read_ppm(f));

  const auto truth_path = dir / "truth.csv";
  if (std::filesystem::exists(truth_path)) {
    const auto table = read_csv(truth_path);
    const auto ci = table.column("frame_index");
    const auto cx = table.column("x");
    const auto cy = table.column("y");
    scene.truth.assign(scene.frames.size(), Point2{});
    std::vector<bool> seen(scene.frames.size(), false);
    for (const auto& row : table.rows) {
      const double idx = parse_double(row[ci], "truth.csv frame_index");
      if (idx < 0 || idx >= static_cast<double>(scene.frames.size()) || idx != static_cast<std::size_t>(idx)) {
        throw std::runtime_error(fmt::format("truth.csv: frame_index {} out of range", row[ci]));
      }
      const auto i = static_cast<std::size_t>(idx);
      scene.truth[i] = {parse_double(row[cx], "truth.csv x"), parse_double(row[cy], "truth.csv y")};
      seen[i] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw std::runtime_error("truth.csv does not cover every frame");
    }
  }
  return scene;
}

}  // namespace croptrack
