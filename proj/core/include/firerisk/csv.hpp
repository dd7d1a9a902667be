#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "firerisk/date.hpp"

namespace firerisk {

/// One parsed data line. `line` is 1-based within the source, counting the header.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Minimal RFC-4180-ish reader: comma separated, optional double quotes,
/// header row required. Every conversion error carries the line number.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);
  CsvReader(std::istream& in, std::string source_name);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::string& source() const noexcept { return source_; }

  /// Index of a named column; throws ParseError if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  /// Throws unless the header starts with exactly these names in order.
  void expect_prefix(std::initializer_list<std::string_view> names) const;

  /// Reads the next non-empty line. Throws on a field-count mismatch.
  bool next(CsvRow& row);

  std::string text(const CsvRow& row, std::size_t col) const;
  double number(const CsvRow& row, std::size_t col) const;
  long long integer(const CsvRow& row, std::size_t col) const;
  Date date(const CsvRow& row, std::size_t col) const;

  [[noreturn]] void fail(const CsvRow& row, const std::string& what) const;

 private:
  void read_header();

  std::unique_ptr<std::ifstream> owned_;
  std::istream* in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest round-trip decimal representation; deterministic across runs.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  explicit CsvWriter(std::ostream& out);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(Date d) { return field(std::string_view(d.iso())); }
  void end_row();
  void row(std::initializer_list<std::string_view> fields);
  void close();

 private:
  void sep();

  std::unique_ptr<std::ofstream> owned_;
  std::ostream* out_;
  std::filesystem::path path_;
  bool first_ = true;
};

}  // namespace firerisk
