#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firerisk/date.hpp"
#include "firerisk/grid.hpp"

namespace firerisk {

/// A single named raster variable. Dated layers hold [date][y][x] values;
/// static layers (empty `dates`) hold one [y][x] plane that is broadcast over time.
struct FeatureLayer {
  std::string name;
  std::vector<Date> dates;
  int n_y = 0;
  int n_x = 0;
  std::vector<double> values;

  bool is_static() const noexcept { return dates.empty(); }
};

/// Daily department datacube laid out [time][y][x][feature], float32.
///
/// Immutable once built: dates are contiguous days, feature names are unique
/// and no value is NaN. The constructor enforces all three.
class DataCube {
 public:
  DataCube(std::string department_id, GridSpec grid, std::vector<Date> dates, std::vector<std::string> feature_names,
           std::vector<float> values);

  const std::string& department_id() const noexcept { return department_id_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::span<const float> values() const noexcept { return values_; }

  std::size_t n_time() const noexcept { return dates_.size(); }
  std::size_t n_y() const noexcept { return static_cast<std::size_t>(grid_.n_y); }
  std::size_t n_x() const noexcept { return static_cast<std::size_t>(grid_.n_x); }
  std::size_t n_features() const noexcept { return feature_names_.size(); }
  std::size_t n_cells() const noexcept { return grid_.cell_count(); }

  std::size_t offset(std::size_t t, std::size_t y, std::size_t x, std::size_t f) const noexcept {
    return ((t * n_y() + y) * n_x() + x) * n_features() + f;
  }
  float at(std::size_t t, std::size_t y, std::size_t x, std::size_t f) const noexcept {
    return values_[offset(t, y, x, f)];
  }

  std::optional<std::size_t> find_feature(std::string_view name) const noexcept;
  /// Throws ValidationError if the feature is absent.
  std::size_t feature_index(std::string_view name) const;

  /// Copies one feature out as [time][cell] doubles.
  std::vector<double> feature_plane(std::size_t f) const;

  /// New cube with extra features appended; `extra` is [time][cell][new feature].
  DataCube with_features(const std::vector<std::string>& names, std::span<const float> extra) const;

  /// Bitwise equality of every field (NaN-free, so float == is exact).
  bool operator==(const DataCube& other) const;

 private:
  std::string department_id_;
  GridSpec grid_;
  std::vector<Date> dates_;
  std::vector<std::string> feature_names_;
  std::vector<float> values_;
};

struct ImputeOptions {
  /// Missing values are carried forward for at most this many days.
  int max_forward_fill_days = 3;
  /// Dates whose values feed the fallback mean. Defaults to every date.
  std::function<bool(Date)> is_training;
};

/// Forward-fills at most `max_days` consecutive NaNs, then replaces the rest
/// with the mean of the non-NaN entries flagged by `use_for_mean` (or of all
/// non-NaN entries when none are flagged). Returns false if the series has no
/// finite value at all.
bool impute_series(std::span<double> series, int max_days, const std::vector<bool>& use_for_mean);

/// Stacks layers into a cube, feature order = layer order.
/// Throws ShapeError on grid or date-range mismatch and ValidationError on
/// date gaps (the message names the missing dates) or unrecoverable NaNs.
DataCube build_cube(const std::string& department_id, const std::vector<FeatureLayer>& layers, const GridSpec& grid,
                    const ImputeOptions& options = {});

}  // namespace firerisk
