#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firerisk/date.hpp"
#include "firerisk/ingest.hpp"

namespace firerisk {

/// Department-day rows with named numeric columns, stored column-major.
/// Rows are kept sorted by (department, date) with one row per pair.
class FeatureTable {
 public:
  FeatureTable() = default;

  /// Adds one row per (department, date); throws ValidationError on a
  /// duplicate key. Columns must be added after all rows.
  void add_rows(const std::string& department_id, std::span<const Date> dates, std::span<const Split> splits);

  /// Appends a column; throws on a duplicate name or wrong length.
  void add_column(std::string name, std::vector<double> values);
  void remove_columns(const std::vector<std::string>& names);
  /// Keeps only the named columns, in the given order.
  FeatureTable select_columns(const std::vector<std::string>& names) const;

  std::size_t n_rows() const noexcept { return departments_.size(); }
  std::size_t n_cols() const noexcept { return names_.size(); }

  const std::vector<std::string>& departments() const noexcept { return departments_; }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<Split>& splits() const noexcept { return splits_; }
  std::vector<Split>& splits() noexcept { return splits_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

  std::optional<std::size_t> find_column(std::string_view name) const noexcept;
  /// Throws ValidationError if absent.
  std::size_t column_index(std::string_view name) const;
  const std::vector<double>& column(std::size_t c) const { return columns_.at(c); }
  std::vector<double>& column(std::size_t c) { return columns_.at(c); }
  const std::vector<double>& column(std::string_view name) const { return columns_[column_index(name)]; }

  /// Sorted distinct department ids.
  std::vector<std::string> department_ids() const;
  /// Row index of (department, date), if present.
  std::optional<std::size_t> find_row(const std::string& department_id, Date date) const;

  /// Sorts rows by (department, date); called implicitly by add_rows.
  void sort_rows();

  bool operator==(const FeatureTable&) const = default;

 private:
  std::vector<std::string> departments_;
  std::vector<Date> dates_;
  std::vector<Split> splits_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// `department,date,split,<features...>`
void write_feature_table_csv(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_feature_table_csv(const std::filesystem::path& path);

}  // namespace firerisk
