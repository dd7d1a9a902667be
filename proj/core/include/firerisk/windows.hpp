#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "firerisk/feature_table.hpp"
#include "firerisk/labeling.hpp"

namespace firerisk {

inline constexpr int kDefaultWindowDays = 10;

struct WindowInfo {
  std::string department_id;
  /// Last day of the window; the label belongs to this day.
  Date end_date;
  Split split = Split::Excluded;
  int label = 0;
};

struct WindowExport {
  int window = kDefaultWindowDays;
  std::vector<std::string> feature_names;
  std::vector<WindowInfo> windows;
  /// [window][time][feature]
  std::vector<float> values;
  /// Rows without enough history to close a window.
  std::size_t skipped = 0;
};

/// Trailing blocks of `window` consecutive days per department: the block
/// ending at t holds rows t-window+1..t, so it depends only on data up to t.
/// Requires contiguous dates per department and a label for every row of
/// the target. `features` empty means every table column.
WindowExport build_windows(const FeatureTable& table, const std::vector<RiskLabelSeries>& labels, Target target,
                           int window = kDefaultWindowDays, const std::vector<std::string>& features = {});

/// One JSON header line (shape, feature names, per-window metadata), then
/// little-endian float32 values.
void write_windows(const WindowExport& windows, const std::filesystem::path& path);
/// Throws IntegrityError on a malformed header or payload size mismatch.
WindowExport read_windows(const std::filesystem::path& path);

}  // namespace firerisk
