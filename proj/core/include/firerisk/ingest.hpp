#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "firerisk/cube.hpp"
#include "firerisk/date.hpp"
#include "firerisk/grid.hpp"

namespace firerisk {

/// One dated ignition record.
struct FireEvent {
  Date date;
  std::string department_id;
  std::string location_ref;
  double burned_area_ha = 0.0;

  bool operator==(const FireEvent&) const = default;
};

/// One observation at a point of the 11 x 11 department weather lattice.
struct WeatherRecord {
  Date date;
  std::string department_id;
  Cell grid_point;
  int observation_hour = 12;
  double temperature_c = 0.0;
  double dew_point_c = 0.0;
  double precipitation_mm = 0.0;
  double wind_speed_kmh = 0.0;
  double wind_direction_deg = 0.0;
  double snow_height_cm = 0.0;

  /// Throws ValidationError if the lattice point or hour is out of range.
  void validate() const;
};

enum class Split { Train, Val, Test, Excluded };

std::string_view to_string(Split s) noexcept;
Split split_from_string(std::string_view s);

/// Year-based train/validation/test assignment.
class TemporalSplit {
 public:
  TemporalSplit() = default;
  /// Throws ValidationError if any two sets share a year.
  TemporalSplit(std::set<int> train, std::set<int> val, std::set<int> test);

  /// Train 2017-2020 and 2022, validate on 2021 and 2024, test on 2023.
  static TemporalSplit france_2017_2024();

  Split assign(Date d) const noexcept;

  const std::set<int>& train_years() const noexcept { return train_; }
  const std::set<int>& val_years() const noexcept { return val_; }
  const std::set<int>& test_years() const noexcept { return test_; }

 private:
  std::set<int> train_, val_, test_;
};

/// Daily department rasters of fire counts and burned area, [day][y][x].
struct DailyRasters {
  DateRange period;
  int n_y = 0;
  int n_x = 0;
  std::vector<std::int32_t> counts;
  std::vector<double> burned_area_ha;

  std::size_t cells() const noexcept { return static_cast<std::size_t>(n_y) * static_cast<std::size_t>(n_x); }
};

/// Burns events into per-day rasters. Events of other departments are
/// ignored. Throws ValidationError listing every event whose location_ref is
/// not in the gazetteer, whose date is outside `period`, or whose burned area
/// is negative.
DailyRasters rasterize_events(const std::vector<FireEvent>& events, const GridSpec& grid, const Gazetteer& gazetteer,
                              DateRange period);

/// Resamples lattice weather onto the department grid by nearest neighbour.
/// Produces one dated layer per variable and hour (`temp_c_12h`, ...). Missing
/// observations are NaN; build_cube imputes them.
std::vector<FeatureLayer> weather_layers(const std::vector<WeatherRecord>& records, const GridSpec& grid,
                                         DateRange period);

/// Names produced by weather_layers, in order.
const std::vector<std::string>& weather_layer_names();

// Delimited-text schemas.

/// `date,department,location_ref,burned_area_ha`
std::vector<FireEvent> read_events_csv(const std::filesystem::path& path);
void write_events_csv(const std::vector<FireEvent>& events, const std::filesystem::path& path);

/// `date,department,row,col,hour,temp_c,dew_c,precip_mm,wind_kmh,wind_dir_deg,snow_cm`
std::vector<WeatherRecord> read_weather_csv(const std::filesystem::path& path);
void write_weather_csv(const std::vector<WeatherRecord>& records, const std::filesystem::path& path);

/// `row,col,<layer>...`; one static layer per extra column. Every cell must appear once.
std::vector<FeatureLayer> read_static_layers_csv(const std::filesystem::path& path, const GridSpec& grid);
void write_static_layers_csv(const std::vector<FeatureLayer>& layers, const GridSpec& grid,
                             const std::filesystem::path& path);

}  // namespace firerisk
