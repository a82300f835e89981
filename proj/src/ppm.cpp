#include "croptrack/ppm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/core.h>

namespace croptrack {
namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
long read_header_value(std::istream& in) {
  std::string token;
  while (token.empty()) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("PPM: truncated header");
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c) == 0) {
      token.push_back(static_cast<char>(c));
      while (std::isdigit(in.peek()) != 0) token.push_back(static_cast<char>(in.get()));
    }
  }
  try {
    return std::stol(token);
  } catch (const std::exception&) {
    throw std::runtime_error(fmt::format("PPM: malformed header value '{}'", token));
  }
}

}  // namespace

Frame read_ppm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '6') {
    throw std::runtime_error("PPM: expected P6 magic number");
  }
  const long width = read_header_value(in);
  const long height = read_header_value(in);
  const long maxval = read_header_value(in);
  if (width < 1 || height < 1 || width > 1 << 16 || height > 1 << 16) {
    throw std::runtime_error(fmt::format("PPM: unsupported dimensions {}x{}", width, height));
  }
  if (maxval < 1 || maxval > 255) {
    throw std::runtime_error(fmt::format("PPM: unsupported maxval {}", maxval));
  }
  if (std::isspace(in.get()) == 0) throw std::runtime_error("PPM: missing whitespace after header");

  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
  if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()))) {
    throw std::runtime_error("PPM: truncated pixel data");
  }
  if (maxval != 255) {
    for (auto& v : data) v = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  }
  return {static_cast<int>(width), static_cast<int>(height), std::move(data)};
}

Frame read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("PPM: cannot open {}", path.string()));
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const Frame& frame) {
  out << "P6\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  const auto px = frame.data();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw std::runtime_error("PPM: write failed");
}

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("PPM: cannot create {}", path.string()));
  write_ppm(out, frame);
}

}  // namespace croptrack
