#pragma once

#include <filesystem>

#include "croptrack/synth.hpp"

namespace croptrack {

/// Writes frame_000000.ppm, frame_000001.ppm, ... and truth.csv (frame_index,x,y) into `dir`.
void write_scene(const std::filesystem::path& dir, const Scene& scene);

/// Reads every *.ppm in `dir` in file-name order, plus truth.csv when present (otherwise truth is empty).
[[nodiscard]] Scene read_scene(const std::filesystem::path& dir);

}  // namespace croptrack
