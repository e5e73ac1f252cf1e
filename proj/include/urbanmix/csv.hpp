#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "urbanmix/error.hpp"

namespace urbanmix::csv {

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Parsed CSV table. Row numbers reported in errors are 1-based file lines,
/// so the header is line 1 and the first data row is line 2.
struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t line_of(std::size_t row) const { return row + 2; }

  [[nodiscard]] double number(std::size_t row, std::size_t col) const {
    std::string_view cell = trim(rows[row][col]);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw ValidationError(path + ": non-numeric value '" + std::string(cell) + "' in column '" + header[col] +
                            "' at row " + std::to_string(line_of(row)));
    }
    return v;
  }

  [[nodiscard]] long integer(std::size_t row, std::size_t col) const {
    std::string_view cell = trim(rows[row][col]);
    long v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw ValidationError(path + ": non-integer value '" + std::string(cell) + "' in column '" + header[col] +
                            "' at row " + std::to_string(line_of(row)));
    }
    return v;
  }
};

/// Reads a comma-separated file and checks that its header equals `expected`.
inline Table read(const std::filesystem::path& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Table t;
  t.path = path.string();
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(t.path + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
  for (auto f : split(trim(line))) t.header.emplace_back(trim(f));
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ValidationError(t.path + ": header must be '" + want + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line));
    if (fields.size() != expected.size()) {
      throw ValidationError(t.path + ": expected " + std::to_string(expected.size()) + " fields at row " +
                            std::to_string(lineno));
    }
    std::vector<std::string> row;
    row.reserve(fields.size());
    for (auto f : fields) row.emplace_back(f);
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Shortest decimal representation that round-trips to the same double.
inline std::string format(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Fixed-point representation with `digits` decimals, for report tables.
inline std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos) s.erase(0, s[0] == '-' ? 1 : 0);
  return s;
}

/// Line-buffered writer that fails loudly on I/O errors.
class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace urbanmix::csv
