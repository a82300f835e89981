#include "croptrack/csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/core.h>

namespace croptrack {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range(fmt::format("CSV has no column '{}'", name));
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    // A line holding nothing at all is skipped rather than read as one empty field.
    const bool blank = record.empty() && field.empty() && !field_started;
    end_field();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  for (int c = in.get(); c != EOF; c = in.get()) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) throw std::runtime_error("CSV: stray quote inside unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') in.get();
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(static_cast<char>(c));
    }
  }
  if (in_quotes) throw std::runtime_error("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw std::runtime_error("CSV: missing header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw std::runtime_error(fmt::format("CSV: record {} has {} fields, header has {}", i + 1, records[i].size(),
                                           table.header.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  return read_csv(in);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  // A record holding one empty field would otherwise be a blank line, which readers skip.
  if (fields.size() == 1 && fields[0].empty()) {
    out << "\"\"\n";
    return;
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

std::string fmt_num(double v) {
  if (v == 0.0) return "0";  // no "-0"
  return fmt::format("{:.6g}", v);
}

double parse_double(std::string_view text, std::string_view what) {
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  const std::string s(first == std::string_view::npos ? std::string_view{} : text.substr(first, last - first + 1));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a number", what, s));
  }
  if (used != s.size()) throw std::invalid_argument(fmt::format("{}: '{}' is not a number", what, s));
  if (!std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a finite number", what, s));
  }
  return v;
}

}  // namespace croptrack
