#include "firerisk/csv.hpp"

#include <charconv>
#include <cmath>

#include "firerisk/error.hpp"

namespace firerisk {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

CsvReader::CsvReader(const std::filesystem::path& path)
    : owned_(std::make_unique<std::ifstream>(path)), in_(owned_.get()), source_(path.string()) {
  if (!*owned_) throw ValidationError("cannot open " + source_);
  read_header();
}

CsvReader::CsvReader(std::istream& in, std::string source_name) : in_(&in), source_(std::move(source_name)) {
  read_header();
}

void CsvReader::read_header() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    header_ = split_csv_line(line);
    return;
  }
  throw ParseError(source_, line_no_ == 0 ? 1 : line_no_, "missing header row");
}

std::size_t CsvReader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw ParseError(source_, 1, "missing column '" + std::string(name) + "'");
}

bool CsvReader::has_column(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

void CsvReader::expect_prefix(std::initializer_list<std::string_view> names) const {
  std::size_t i = 0;
  for (auto n : names) {
    if (i >= header_.size() || header_[i] != n) {
      throw ParseError(source_, 1, "expected column " + std::to_string(i + 1) + " to be '" + std::string(n) + "'");
    }
    ++i;
  }
}

bool CsvReader::next(CsvRow& row) {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    row.line = line_no_;
    row.fields = split_csv_line(line);
    if (row.fields.size() != header_.size()) {
      fail(row, "expected " + std::to_string(header_.size()) + " fields, found " + std::to_string(row.fields.size()));
    }
    return true;
  }
  return false;
}

void CsvReader::fail(const CsvRow& row, const std::string& what) const { throw ParseError(source_, row.line, what); }

std::string CsvReader::text(const CsvRow& row, std::size_t col) const { return row.fields.at(col); }

double CsvReader::number(const CsvRow& row, std::size_t col) const {
  const std::string& s = row.fields.at(col);
  if (s.empty() || s == "NaN" || s == "nan" || s == "NA") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(row, "column '" + header_.at(col) + "': not a number: '" + s + "'");
  }
  return v;
}

long long CsvReader::integer(const CsvRow& row, std::size_t col) const {
  const std::string& s = row.fields.at(col);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(row, "column '" + header_.at(col) + "': not an integer: '" + s + "'");
  }
  return v;
}

Date CsvReader::date(const CsvRow& row, std::size_t col) const {
  auto d = Date::try_parse(row.fields.at(col));
  if (!d) fail(row, "column '" + header_.at(col) + "': not an ISO date: '" + row.fields.at(col) + "'");
  return *d;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : owned_(std::make_unique<std::ofstream>(path, std::ios::binary)), out_(owned_.get()), path_(path) {
  if (!*owned_) throw ValidationError("cannot write " + path.string());
}

CsvWriter::CsvWriter(std::ostream& out) : out_(&out) {}

void CsvWriter::sep() {
  if (!first_) out_->put(',');
  first_ = false;
}

CsvWriter& CsvWriter::field(std::string_view s) {
  sep();
  if (s.find_first_of(",\"\n") != std::string_view::npos) {
    out_->put('"');
    for (char c : s) {
      if (c == '"') out_->put('"');
      out_->put(c);
    }
    out_->put('"');
  } else {
    out_->write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_number(v))); }

CsvWriter& CsvWriter::field(long long v) {
  sep();
  *out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  out_->put('\n');
  first_ = true;
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
  for (auto f : fields) field(f);
  end_row();
}

void CsvWriter::close() {
  out_->flush();
  if (!*out_) throw ValidationError("write failed for " + path_.string());
  if (owned_) owned_->close();
}

}  // namespace firerisk
