#include "croptrack/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

#include "croptrack/csv.hpp"

namespace croptrack {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  return parts;
}

std::vector<double> numbers(const std::string& key, const std::string& value, std::size_t n) {
  const auto parts = split(value, ',');
  if (parts.size() != n) {
    throw std::invalid_argument(fmt::format("{}: expected {} comma-separated values, got '{}'", key, n, value));
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_double(p, key));
  return out;
}

long long integer(const std::string& key, const std::string& value) {
  const double v = parse_double(value, key);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not an integer", key, value));
  }
  return static_cast<long long>(v);
}

std::uint64_t unsigned_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  try {
    const auto v = std::stoull(value, &used);
    if (used == value.size() && value.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(fmt::format("{}: '{}' is not a non-negative integer", key, value));
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument(fmt::format("{}: '{}' is not a boolean", key, value));
}

Rgb color(const std::string& key, const std::string& value) {
  const auto v = numbers(key, value, 3);
  for (double c : v) {
    if (c < 0 || c > 255 || c != static_cast<int>(c)) {
      throw std::invalid_argument(fmt::format("{}: color components must be integers in [0,255]", key));
    }
  }
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
}

std::string color_text(Rgb c) { return fmt::format("{},{},{}", c.r, c.g, c.b); }

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(fmt::format("config line {}: expected key = value", number));
    const auto key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw std::invalid_argument(fmt::format("config line {}: empty key", number));
    kv[key] = trim(std::string_view(text).substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config {}", path.string()));
  return parse_key_values(in);
}

void apply_scene_config(const KeyValues& kv, SceneSpec& spec) {
  for (const auto& [key, value] : kv) {
    if (key == "name") {
      spec.name = value;
    } else if (key == "frame_size") {
      const auto v = numbers(key, value, 2);
      spec.frame_width = static_cast<int>(v[0]);
      spec.frame_height = static_cast<int>(v[1]);
    } else if (key == "n_frames") {
      spec.n_frames = unsigned_integer(key, value);
    } else if (key == "object.shape") {
      if (value == "rect") {
        spec.object.shape = Shape::Rect;
      } else if (value == "ellipse") {
        spec.object.shape = Shape::Ellipse;
      } else {
        throw std::invalid_argument(fmt::format("{}: expected rect or ellipse, got '{}'", key, value));
      }
    } else if (key == "object.size") {
      const auto v = numbers(key, value, 2);
      spec.object.width = static_cast<int>(v[0]);
      spec.object.height = static_cast<int>(v[1]);
    } else if (key == "object.color") {
      spec.object.color = color(key, value);
    } else if (key == "motion.start") {
      const auto v = numbers(key, value, 2);
      spec.motion.start = {v[0], v[1]};
    } else if (key == "motion.velocity") {
      const auto v = numbers(key, value, 2);
      spec.motion.velocity = {v[0], v[1]};
    } else if (key == "motion.jitter_sigma") {
      spec.motion.jitter_sigma = parse_double(value, key);
    } else if (key == "motion.bounce") {
      spec.motion.bounce = boolean(key, value);
    } else if (key == "clutter.n_distractors") {
      spec.clutter.n_distractors = static_cast<int>(integer(key, value));
    } else if (key == "clutter.distractor_colors") {
      spec.clutter.colors.clear();
      for (const auto& c : split(value, ';')) {
        if (!c.empty()) spec.clutter.colors.push_back(color(key, c));
      }
    } else if (key == "background") {
      spec.background = color(key, value);
    } else if (key == "noise_sigma") {
      spec.noise_sigma = parse_double(value, key);
    } else if (key == "seed") {
      spec.seed = unsigned_integer(key, value);
    } else if (key == "occlusion") {
      const auto v = numbers(key, value, 2);
      if (v[0] < 0 || v[1] < 0) throw std::invalid_argument("occlusion: start and length must be >= 0");
      spec.occlusion = {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])};
    } else {
      throw std::invalid_argument(fmt::format("unknown scene key '{}'", key));
    }
  }
}

void apply_tracker_config(const KeyValues& kv, TrackerConfig& cfg) {
  for (const auto& [key, value] : kv) {
    if (key == "window_multiple") {
      cfg.window_multiple = parse_double(value, key);
    } else if (key == "full_frame") {
      cfg.full_frame = boolean(key, value);
    } else if (key == "threshold") {
      cfg.detect_threshold = parse_double(value, key);
    } else if (key == "median_radius") {
      cfg.median_radius = static_cast<int>(integer(key, value));
    } else if (key == "kalman.q") {
      cfg.kalman.process = parse_double(value, key);
    } else if (key == "kalman.r") {
      cfg.kalman.measurement = parse_double(value, key);
    } else if (key == "kalman.p0_position") {
      cfg.kalman.initial_position_var = parse_double(value, key);
    } else if (key == "kalman.p0_velocity") {
      cfg.kalman.initial_velocity_var = parse_double(value, key);
    } else if (key == "max_init_frames") {
      cfg.max_init_frames = static_cast<int>(integer(key, value));
    } else if (key == "gate") {
      cfg.gate = parse_double(value, key);
    } else {
      throw std::invalid_argument(fmt::format("unknown tracker key '{}'", key));
    }
  }
}

std::string format_scene_config(const SceneSpec& spec) {
  std::string colors;
  for (const auto& c : spec.clutter.colors) {
    if (!colors.empty()) colors += ';';
    colors += color_text(c);
  }
  std::string out;
  out += fmt::format("name = {}\n", spec.name);
  out += fmt::format("frame_size = {},{}\n", spec.frame_width, spec.frame_height);
  out += fmt::format("n_frames = {}\n", spec.n_frames);
  out += fmt::format("object.shape = {}\n", spec.object.shape == Shape::Rect ? "rect" : "ellipse");
  out += fmt::format("object.size = {},{}\n", spec.object.width, spec.object.height);
  out += fmt::format("object.color = {}\n", color_text(spec.object.color));
  out += fmt::format("motion.start = {},{}\n", fmt_num(spec.motion.start.x), fmt_num(spec.motion.start.y));
  out += fmt::format("motion.velocity = {},{}\n", fmt_num(spec.motion.velocity.x), fmt_num(spec.motion.velocity.y));
  out += fmt::format("motion.jitter_sigma = {}\n", fmt_num(spec.motion.jitter_sigma));
  out += fmt::format("motion.bounce = {}\n", spec.motion.bounce ? "true" : "false");
  out += fmt::format("clutter.n_distractors = {}\n", spec.clutter.n_distractors);
  out += fmt::format("clutter.distractor_colors = {}\n", colors);
  out += fmt::format("background = {}\n", color_text(spec.background));
  out += fmt::format("noise_sigma = {}\n", fmt_num(spec.noise_sigma));
  out += fmt::format("seed = {}\n", spec.seed);
  out += fmt::format("occlusion = {},{}\n", spec.occlusion.start, spec.occlusion.length);
  return out;
}

}  // namespace croptrack
