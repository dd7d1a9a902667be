#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "firerisk/cube.hpp"
#include "firerisk/grid.hpp"
#include "firerisk/ingest.hpp"

namespace firerisk {

/// Fire/weather climate profile of a synthetic department.
struct Regime {
  std::string name;
  /// Mean daily ignitions over the generated period, department-wide.
  double ignition_rate = 1.0;
  /// 0 gives a flat seasonal profile; 1 concentrates ignitions in summer.
  double seasonal_amplitude = 0.0;
  int peak_day_of_year = 205;
  /// Multiplicative sensitivity of the ignition rate to hot, dry spells.
  double weather_coupling = 0.6;
  double mean_burned_area_ha = 2.0;
  double temperature_mean_c = 12.0;
  double temperature_amplitude_c = 7.0;
  double rain_probability = 0.35;
  double mean_rain_mm = 6.0;

  /// Hot dry summers and frequent ignitions.
  static Regime mediterranean();
  /// Sparse, seasonally flat ignitions in a wetter climate.
  static Regime low_risk();
};

struct SynthConfig {
  std::uint64_t seed = 7;
  int n_departments = 3;
  int n_years = 2;
  int start_year = 2022;
  /// Assigned to departments round-robin. Empty means {mediterranean, low_risk}.
  std::vector<Regime> regimes;
  int n_x = 6;
  int n_y = 5;
  int cities_per_department = 12;
  /// Fraction of weather values blanked to exercise imputation.
  double missing_fraction = 0.002;
};

struct GazetteerEntry {
  std::string location_ref;
  double x = 0.0;
  double y = 0.0;
};

struct SyntheticDepartment {
  std::string id;
  std::string regime;
  GridSpec grid;
  std::vector<GazetteerEntry> cities;
  std::vector<FeatureLayer> static_layers;
};

struct SyntheticRegion {
  DateRange period;
  std::vector<SyntheticDepartment> departments;
  std::vector<FireEvent> events;
  std::vector<WeatherRecord> weather;
};

/// Deterministic given the config. Throws ValidationError if n_years < 2 or
/// n_departments < 1.
SyntheticRegion generate_synthetic_region(const SynthConfig& config);

/// Writes events.csv, weather.csv, grids.csv, gazetteer.csv and
/// static/<department>.csv under `dir`.
void write_synthetic_region(const SyntheticRegion& region, const std::filesystem::path& dir);

/// Static layer names every synthetic department carries.
const std::vector<std::string>& synthetic_static_layer_names();

}  // namespace firerisk
