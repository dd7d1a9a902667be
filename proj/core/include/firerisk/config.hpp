#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "firerisk/date.hpp"
#include "firerisk/ingest.hpp"
#include "firerisk/labeling.hpp"
#include "firerisk/logistic.hpp"
#include "firerisk/models.hpp"

namespace firerisk {

/// Everything a pipeline run depends on. Relative paths in the JSON file are
/// resolved against the file's directory.
struct PipelineConfig {
  struct Paths {
    std::filesystem::path events;
    std::filesystem::path weather;
    std::filesystem::path grids;
    std::filesystem::path gazetteer;
    /// Holds `<department>.csv` static layers; optional.
    std::filesystem::path static_dir;
    /// Land-cover code grouping; the built-in Corine grouping when empty.
    std::filesystem::path landcover_mapping;
    std::filesystem::path out;
  } paths;

  std::set<int> train_years;
  std::set<int> val_years;
  std::set<int> test_years;

  int label_k = kPositiveLevels;
  std::vector<Target> targets{Target::FO, Target::BA};

  MonthDay season_start{1, 1};
  double rain_threshold_mm = 1.0;

  std::size_t cluster_k = 5;
  std::uint64_t cluster_seed = 7;
  int cluster_max_iter = 100;
  /// Daily fire counts are summed over blocks of this many days before DTW.
  std::size_t cluster_resample_days = 7;
  std::optional<std::size_t> cluster_band;

  double encoding_smoothing = 1.0;
  double selection_threshold = 0.95;

  std::vector<int> sweep_grid = undersample_grid();
  /// Share of the latest training days held out for the sweep when no validation years exist.
  double holdout_fraction = 0.25;
  LogisticOptions logistic;
  FwiThresholds fwi_thresholds;

  int window_days = 10;
  bool export_windows = true;

  std::uint64_t seed = 7;
  int jobs = 1;

  TemporalSplit split() const { return {train_years, val_years, test_years}; }

  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  /// Paths are written as given (absolute when loaded from a file).
  nlohmann::ordered_json to_json() const;
  void save(const std::filesystem::path& path) const;

  /// Throws ValidationError on missing input files, overlapping or empty
  /// train/test years, and out-of-range options.
  void validate() const;
};

/// Config for a region written by write_synthetic_region into `data_dir`:
/// all years but the last train, the last one tests, no validation years.
PipelineConfig synthetic_pipeline_config(const std::filesystem::path& data_dir, int start_year, int n_years,
                                         const std::filesystem::path& out_dir);

}  // namespace firerisk
