#pragma once

#include <span>
#include <vector>

namespace firerisk::fwi {

/// Standard CFFDRS startup codes.
inline constexpr double kStartFfmc = 85.0;
inline constexpr double kStartDmc = 6.0;
inline constexpr double kStartDc = 15.0;

/// Moisture-code carry-over state of one cell.
struct FwiState {
  double ffmc = kStartFfmc;
  double dmc = kStartDmc;
  double dc = kStartDc;
  int day_of_year = 0;
  int last_reset_year = 0;

  bool valid() const noexcept { return ffmc >= 0.0 && ffmc <= 101.0 && dmc >= 0.0 && dc >= 0.0; }
};

/// Noon weather driving one FWI step.
struct NoonWeather {
  double temperature_c = 0.0;
  double relative_humidity = 0.0;  ///< percent, clamped to [0, 100]
  double wind_kmh = 0.0;
  double rain_24h_mm = 0.0;
};

struct FwiOutputs {
  FwiState state;
  double isi = 0.0;
  double bui = 0.0;
  double fwi = 0.0;
  double dsr = 0.0;
};

/// Relative humidity (%) from temperature and dew point via the Magnus
/// approximation. Not clamped.
double relative_humidity_magnus(double temperature_c, double dew_point_c) noexcept;

// Van Wagner (1987) component equations.
double fine_fuel_moisture_code(double ffmc_prev, double temperature_c, double rh, double wind_kmh, double rain_mm) noexcept;
double duff_moisture_code(double dmc_prev, double temperature_c, double rh, double rain_mm, int month) noexcept;
double drought_code(double dc_prev, double temperature_c, double rain_mm, int month) noexcept;
double initial_spread_index(double ffmc, double wind_kmh) noexcept;
double buildup_index(double dmc, double dc) noexcept;
double fire_weather_index(double isi, double bui) noexcept;
double daily_severity_rating(double fwi) noexcept;

/// One daily step of the FWI system. Humidity outside [0, 100] is clamped
/// and reported through the warning log. `month` is 1..12.
FwiOutputs fwi_system_step(const FwiState& state, const NoonWeather& weather, int month);

/// Structure-of-arrays FWI state for a raster; steps every cell at once.
class FwiRaster {
 public:
  explicit FwiRaster(std::size_t cells);

  std::size_t cells() const noexcept { return ffmc_.size(); }
  void reset();

  /// Advances all cells one day. Input spans have one entry per cell; output
  /// spans receive ffmc, dmc, dc, isi, bui, fwi and dsr per cell.
  void step(std::span<const double> temperature_c, std::span<const double> rh, std::span<const double> wind_kmh,
            std::span<const double> rain_mm, int month, std::span<double> ffmc, std::span<double> dmc,
            std::span<double> dc, std::span<double> isi, std::span<double> bui, std::span<double> fwi,
            std::span<double> dsr);

 private:
  std::vector<double> ffmc_, dmc_, dc_;
};

}  // namespace firerisk::fwi
