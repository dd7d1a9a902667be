#pragma once

#include <span>
#include <string>
#include <vector>

#include "firerisk/cube.hpp"
#include "firerisk/date.hpp"
#include "firerisk/fwi.hpp"

namespace firerisk {

/// Carry-over state of the cumulative dryness indices for one cell.
struct SimpleIndexState {
  double nesterov = 0.0;
  int munger_dry_days = 0;
  double kbdi_mm = 0.0;
  double kbdi_spell_rain_mm = 0.0;
};

struct SimpleIndexWeather {
  double temperature_c = 0.0;
  double dew_point_c = 0.0;
  double relative_humidity = 0.0;
  double rain_mm = 0.0;
};

struct SimpleIndexParams {
  double nesterov_reset_mm = 3.0;
  /// Half an inch of rain restarts the Munger day count.
  double munger_reset_mm = 12.7;
  /// Interception at the start of a rain spell before KBDI is reduced.
  double kbdi_interception_mm = 5.08;
  double kbdi_annual_rain_mm = 800.0;
};

struct SimpleIndices {
  double nesterov = 0.0;
  double munger = 0.0;
  double kbdi = 0.0;
  double angstroem = 0.0;
};

/// Angstroem index RH/20 + (27 - T)/10; stateless.
double angstroem_index(double temperature_c, double relative_humidity) noexcept;

/// Advances Nesterov, Munger and Keetch-Byram (metric form) by one day and
/// evaluates Angstroem.
SimpleIndices simple_indices_step(SimpleIndexState& state, const SimpleIndexWeather& weather,
                                  const SimpleIndexParams& params = {});

/// All index state carried per cell.
struct IndexState {
  fwi::FwiState fwi;
  SimpleIndexState simple;
};

/// Returns startup state when `date` is the configured season start,
/// otherwise `state` unchanged.
IndexState annual_reset(const IndexState& state, Date date, MonthDay season_start = {});

struct PrecipFeatures {
  std::vector<double> rain_24h;
  std::vector<double> rain_sum_7d;
  std::vector<double> days_since_rain;
  std::vector<double> precip_index_3d;
  std::vector<double> precip_index_5d;
  std::vector<double> precip_index_9d;
};

inline constexpr int kDaysSinceRainCap = 99;

/// Discounted trailing rain sum over `window` days ending at `t` inclusive:
/// sum_{d=0}^{w-1} p(t-d) * (w-d)/w. Truncated at the start of the series.
double precip_index(std::span<const double> daily_mm, std::size_t t, int window) noexcept;

/// Rolling rain features of a daily series. Windows are trailing and include
/// the current day; a day counts as rainy when p > rain_threshold_mm. Before
/// the first rainy day, days_since_rain holds the cap.
PrecipFeatures precip_features(std::span<const double> daily_mm, double rain_threshold_mm = 1.0,
                               int cap = kDaysSinceRainCap);

struct IndexOptions {
  MonthDay season_start{1, 1};
  double rain_threshold_mm = 1.0;
  /// Observation hour feeding the FWI system.
  int fwi_hour = 12;
  /// Observation hour feeding Nesterov, KBDI and Angstroem.
  int dryness_hour = 16;
  SimpleIndexParams simple;
};

/// Feature names appended by compute_indices, in order.
const std::vector<std::string>& index_feature_names();

/// Appends every fire-danger and precipitation feature to a weather cube.
/// Requires `temp_c_<h>h`, `dew_c_<h>h`, `wind_kmh_<h>h` and `precip_mm_<h>h`
/// for the configured hours. Cells are independent; days run in order.
DataCube compute_indices(const DataCube& cube, const IndexOptions& options = {});

}  // namespace firerisk
