#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace croptrack {

/// Header row plus data rows, all fields as text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of the named column; throws std::out_of_range if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and line breaks. CRLF is accepted.
[[nodiscard]] CsvTable read_csv(std::istream& in);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Writes one record, quoting fields that need it. Lines end with '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Six significant digits, shortest form.
[[nodiscard]] std::string fmt_num(double v);

/// Parses a full string as a finite double; throws std::invalid_argument naming `what`.
[[nodiscard]] double parse_double(std::string_view text, std::string_view what);

}  // namespace croptrack
