#include "firerisk/feature_table.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"

namespace firerisk {

void FeatureTable::add_rows(const std::string& department_id, std::span<const Date> dates,
                            std::span<const Split> splits) {
  if (!names_.empty()) throw ValidationError("FeatureTable: rows must be added before columns");
  if (dates.size() != splits.size()) throw ShapeError("FeatureTable: dates and splits differ in length");
  for (std::size_t i = 0; i < dates.size(); ++i) {
    departments_.push_back(department_id);
    dates_.push_back(dates[i]);
    splits_.push_back(splits[i]);
  }
  sort_rows();
  for (std::size_t i = 1; i < n_rows(); ++i) {
    if (departments_[i] == departments_[i - 1] && dates_[i] == dates_[i - 1]) {
      throw ValidationError("FeatureTable: duplicate row " + departments_[i] + " " + dates_[i].iso());
    }
  }
}

void FeatureTable::sort_rows() {
  std::vector<std::size_t> order(n_rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (departments_[a] != departments_[b]) return departments_[a] < departments_[b];
    return dates_[a] < dates_[b];
  });
  auto permute = [&](auto& v) {
    auto copy = v;
    for (std::size_t i = 0; i < order.size(); ++i) v[i] = copy[order[i]];
  };
  permute(departments_);
  permute(dates_);
  permute(splits_);
  for (auto& c : columns_) permute(c);
}

void FeatureTable::add_column(std::string name, std::vector<double> values) {
  if (values.size() != n_rows()) {
    throw ShapeError("FeatureTable: column '" + name + "' has " + std::to_string(values.size()) + " values for " +
                     std::to_string(n_rows()) + " rows");
  }
  if (find_column(name)) throw ValidationError("FeatureTable: duplicate column '" + name + "'");
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

void FeatureTable::remove_columns(const std::vector<std::string>& names) {
  const std::set<std::string> drop(names.begin(), names.end());
  std::vector<std::string> kept_names;
  std::vector<std::vector<double>> kept;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (drop.count(names_[c])) continue;
    kept_names.push_back(std::move(names_[c]));
    kept.push_back(std::move(columns_[c]));
  }
  names_ = std::move(kept_names);
  columns_ = std::move(kept);
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& names) const {
  FeatureTable out;
  out.departments_ = departments_;
  out.dates_ = dates_;
  out.splits_ = splits_;
  for (const auto& n : names) out.add_column(n, columns_[column_index(n)]);
  return out;
}

std::optional<std::size_t> FeatureTable::find_column(std::string_view name) const noexcept {
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (names_[c] == name) return c;
  }
  return std::nullopt;
}

std::size_t FeatureTable::column_index(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw ValidationError("FeatureTable: no column '" + std::string(name) + "'");
}

std::vector<std::string> FeatureTable::department_ids() const {
  std::vector<std::string> ids = departments_;
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::optional<std::size_t> FeatureTable::find_row(const std::string& department_id, Date date) const {
  auto lo = std::lower_bound(departments_.begin(), departments_.end(), department_id);
  auto hi = std::upper_bound(lo, departments_.end(), department_id);
  const auto first = static_cast<std::size_t>(lo - departments_.begin());
  const auto last = static_cast<std::size_t>(hi - departments_.begin());
  auto it = std::lower_bound(dates_.begin() + static_cast<std::ptrdiff_t>(first),
                             dates_.begin() + static_cast<std::ptrdiff_t>(last), date);
  const auto idx = static_cast<std::size_t>(it - dates_.begin());
  if (idx < last && dates_[idx] == date) return idx;
  return std::nullopt;
}

void write_feature_table_csv(const FeatureTable& table, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.field("department").field("date").field("split");
  for (const auto& n : table.column_names()) out.field(n);
  out.end_row();
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    out.field(table.departments()[r]).field(table.dates()[r]).field(to_string(table.splits()[r]));
    for (std::size_t c = 0; c < table.n_cols(); ++c) out.field(table.column(c)[r]);
    out.end_row();
  }
  out.close();
}

FeatureTable read_feature_table_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"department", "date", "split"});
  const auto& header = in.header();
  const std::size_t n_features = header.size() - 3;

  struct Row {
    std::string department;
    Date date;
    Split split;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  CsvRow row;
  while (in.next(row)) {
    Row r;
    r.department = in.text(row, 0);
    r.date = in.date(row, 1);
    try {
      r.split = split_from_string(in.text(row, 2));
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    r.values.resize(n_features);
    for (std::size_t c = 0; c < n_features; ++c) r.values[c] = in.number(row, c + 3);
    rows.push_back(std::move(r));
  }

  FeatureTable table;
  std::vector<std::string> order;
  for (const auto& r : rows) order.push_back(r.department);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (const auto& dept : order) {
    std::vector<Date> dates;
    std::vector<Split> splits;
    for (const auto& r : rows) {
      if (r.department != dept) continue;
      dates.push_back(r.date);
      splits.push_back(r.split);
    }
    table.add_rows(dept, dates, splits);
  }
  std::vector<std::vector<double>> cols(n_features, std::vector<double>(table.n_rows()));
  for (const auto& r : rows) {
    const std::size_t idx = *table.find_row(r.department, r.date);
    for (std::size_t c = 0; c < n_features; ++c) cols[c][idx] = r.values[c];
  }
  for (std::size_t c = 0; c < n_features; ++c) table.add_column(header[c + 3], std::move(cols[c]));
  return table;
}

}  // namespace firerisk
