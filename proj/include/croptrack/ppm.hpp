#pragma once

#include <filesystem>
#include <iosfwd>

#include "croptrack/image.hpp"

namespace croptrack {

/// Binary PPM (P6). Header comments are accepted on read; maxval below 255 is rescaled to 8 bits.
[[nodiscard]] Frame read_ppm(std::istream& in);
[[nodiscard]] Frame read_ppm(const std::filesystem::path& path);

void write_ppm(std::ostream& out, const Frame& frame);
void write_ppm(const std::filesystem::path& path, const Frame& frame);

}  // namespace croptrack
