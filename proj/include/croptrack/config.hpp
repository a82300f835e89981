#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "croptrack/synth.hpp"
#include "croptrack/tracker.hpp"

namespace croptrack {

/// Flat `key = value` settings. Blank lines and lines starting with '#' are ignored.
using KeyValues = std::map<std::string, std::string>;

[[nodiscard]] KeyValues parse_key_values(std::istream& in);
[[nodiscard]] KeyValues read_key_values(const std::filesystem::path& path);

/// Applies known scene keys (e.g. `object.size = 40,20`, `motion.velocity = 3,1`).
/// Unknown keys and malformed values throw std::invalid_argument naming the key.
void apply_scene_config(const KeyValues& kv, SceneSpec& spec);

/// Applies tracker keys: window_multiple, threshold, median_radius, kalman.q, kalman.r,
/// kalman.p0_position, kalman.p0_velocity, max_init_frames, gate.
void apply_tracker_config(const KeyValues& kv, TrackerConfig& cfg);

/// Serializes a spec in the format apply_scene_config accepts.
[[nodiscard]] std::string format_scene_config(const SceneSpec& spec);

}  // namespace croptrack
