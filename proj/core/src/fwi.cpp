#include "firerisk/fwi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "firerisk/csv.hpp"
#include "firerisk/log.hpp"

namespace firerisk::fwi {

namespace {

// Day-length factors for DMC and DC (46N tables).
constexpr std::array<double, 12> kDmcDayLength = {6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0};
constexpr std::array<double, 12> kDcDayLength = {-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6};

std::size_t month_index(int month) noexcept { return static_cast<std::size_t>(std::clamp(month, 1, 12) - 1); }

}  // namespace

double relative_humidity_magnus(double temperature_c, double dew_point_c) noexcept {
  constexpr double a = 17.625;
  constexpr double b = 243.04;
  return 100.0 * std::exp(a * dew_point_c / (b + dew_point_c) - a * temperature_c / (b + temperature_c));
}

double fine_fuel_moisture_code(double ffmc_prev, double temp, double rh, double wind, double rain) noexcept {
  double mo = 147.2 * (101.0 - ffmc_prev) / (59.5 + ffmc_prev);
  if (rain > 0.5) {
    const double rf = rain - 0.5;
    double wet = 42.5 * rf * std::exp(-100.0 / (251.0 - mo)) * (1.0 - std::exp(-6.93 / rf));
    if (mo > 150.0) wet += 0.0015 * (mo - 150.0) * (mo - 150.0) * std::sqrt(rf);
    mo = std::min(mo + wet, 250.0);
  }
  const double ed =
      0.942 * std::pow(rh, 0.679) + 11.0 * std::exp((rh - 100.0) / 10.0) + 0.18 * (21.1 - temp) * (1.0 - std::exp(-0.115 * rh));
  double m = mo;
  if (mo > ed) {
    const double ko = 0.424 * (1.0 - std::pow(rh / 100.0, 1.7)) + 0.0694 * std::sqrt(wind) * (1.0 - std::pow(rh / 100.0, 8.0));
    const double kd = ko * 0.581 * std::exp(0.0365 * temp);
    m = ed + (mo - ed) * std::pow(10.0, -kd);
  } else {
    const double ew = 0.618 * std::pow(rh, 0.753) + 10.0 * std::exp((rh - 100.0) / 10.0) +
                      0.18 * (21.1 - temp) * (1.0 - std::exp(-0.115 * rh));
    if (mo < ew) {
      const double k1 = 0.424 * (1.0 - std::pow((100.0 - rh) / 100.0, 1.7)) +
                        0.0694 * std::sqrt(wind) * (1.0 - std::pow((100.0 - rh) / 100.0, 8.0));
      const double kw = k1 * 0.581 * std::exp(0.0365 * temp);
      m = ew - (ew - mo) * std::pow(10.0, -kw);
    }
  }
  const double f = 59.5 * (250.0 - m) / (147.2 + m);
  return std::clamp(f, 0.0, 101.0);
}

double duff_moisture_code(double dmc_prev, double temp, double rh, double rain, int month) noexcept {
  double pr = dmc_prev;
  if (rain > 1.5) {
    const double re = 0.92 * rain - 1.27;
    const double mo = 20.0 + std::exp(5.6348 - dmc_prev / 43.43);
    double b;
    if (dmc_prev <= 33.0) {
      b = 100.0 / (0.5 + 0.3 * dmc_prev);
    } else if (dmc_prev <= 65.0) {
      b = 14.0 - 1.3 * std::log(dmc_prev);
    } else {
      b = 6.2 * std::log(dmc_prev) - 17.2;
    }
    const double mr = mo + 1000.0 * re / (48.77 + b * re);
    pr = std::max(244.72 - 43.43 * std::log(mr - 20.0), 0.0);
  }
  const double t = std::max(temp, -1.1);
  const double k = 1.894 * (t + 1.1) * (100.0 - rh) * kDmcDayLength[month_index(month)] * 1e-4;
  return std::max(pr + k, 0.0);
}

double drought_code(double dc_prev, double temp, double rain, int month) noexcept {
  double dr = dc_prev;
  if (rain > 2.8) {
    const double rd = 0.83 * rain - 1.27;
    const double qo = 800.0 * std::exp(-dc_prev / 400.0);
    const double qr = qo + 3.937 * rd;
    dr = std::max(400.0 * std::log(800.0 / qr), 0.0);
  }
  const double t = std::max(temp, -2.8);
  const double v = std::max(0.36 * (t + 2.8) + kDcDayLength[month_index(month)], 0.0);
  return std::max(dr + 0.5 * v, 0.0);
}

double initial_spread_index(double ffmc, double wind) noexcept {
  const double m = 147.2 * (101.0 - ffmc) / (59.5 + ffmc);
  const double fw = std::exp(0.05039 * wind);
  const double ff = 91.9 * std::exp(-0.1386 * m) * (1.0 + std::pow(m, 5.31) / 4.93e7);
  return 0.208 * fw * ff;
}

double buildup_index(double dmc, double dc) noexcept {
  if (dmc <= 0.0 && dc <= 0.0) return 0.0;
  double u;
  if (dmc <= 0.4 * dc) {
    u = 0.8 * dmc * dc / (dmc + 0.4 * dc);
  } else {
    u = dmc - (1.0 - 0.8 * dc / (dmc + 0.4 * dc)) * (0.92 + std::pow(0.0114 * dmc, 1.7));
  }
  return std::max(u, 0.0);
}

double fire_weather_index(double isi, double bui) noexcept {
  const double fd = bui <= 80.0 ? 0.626 * std::pow(bui, 0.809) + 2.0 : 1000.0 / (25.0 + 108.64 * std::exp(-0.023 * bui));
  const double b = 0.1 * isi * fd;
  return b > 1.0 ? std::exp(2.72 * std::pow(0.434 * std::log(b), 0.647)) : b;
}

double daily_severity_rating(double fwi) noexcept { return 0.0272 * std::pow(fwi, 1.77); }

FwiOutputs fwi_system_step(const FwiState& state, const NoonWeather& w, int month) {
  double rh = w.relative_humidity;
  if (rh < 0.0 || rh > 100.0 || std::isnan(rh)) {
    log::warn("relative humidity " + format_number(rh) + " clamped to [0, 100]");
    rh = std::isnan(rh) ? 100.0 : std::clamp(rh, 0.0, 100.0);
  }
  const double wind = std::max(w.wind_kmh, 0.0);
  const double rain = std::max(w.rain_24h_mm, 0.0);

  FwiOutputs out;
  out.state = state;
  out.state.ffmc = fine_fuel_moisture_code(state.ffmc, w.temperature_c, rh, wind, rain);
  out.state.dmc = duff_moisture_code(state.dmc, w.temperature_c, rh, rain, month);
  out.state.dc = drought_code(state.dc, w.temperature_c, rain, month);
  out.isi = initial_spread_index(out.state.ffmc, wind);
  out.bui = buildup_index(out.state.dmc, out.state.dc);
  out.fwi = fire_weather_index(out.isi, out.bui);
  out.dsr = daily_severity_rating(out.fwi);
  return out;
}

FwiRaster::FwiRaster(std::size_t cells) : ffmc_(cells, kStartFfmc), dmc_(cells, kStartDmc), dc_(cells, kStartDc) {}

void FwiRaster::reset() {
  std::fill(ffmc_.begin(), ffmc_.end(), kStartFfmc);
  std::fill(dmc_.begin(), dmc_.end(), kStartDmc);
  std::fill(dc_.begin(), dc_.end(), kStartDc);
}

void FwiRaster::step(std::span<const double> temp, std::span<const double> rh, std::span<const double> wind,
                     std::span<const double> rain, int month, std::span<double> ffmc, std::span<double> dmc,
                     std::span<double> dc, std::span<double> isi, std::span<double> bui, std::span<double> fwi,
                     std::span<double> dsr) {
  bool clamped = false;
  for (std::size_t c = 0; c < cells(); ++c) {
    double h = rh[c];
    if (!(h >= 0.0 && h <= 100.0)) {
      clamped = true;
      h = std::isnan(h) ? 100.0 : std::clamp(h, 0.0, 100.0);
    }
    const double w = std::max(wind[c], 0.0);
    const double r = std::max(rain[c], 0.0);
    ffmc_[c] = fine_fuel_moisture_code(ffmc_[c], temp[c], h, w, r);
    dmc_[c] = duff_moisture_code(dmc_[c], temp[c], h, r, month);
    dc_[c] = drought_code(dc_[c], temp[c], r, month);
    ffmc[c] = ffmc_[c];
    dmc[c] = dmc_[c];
    dc[c] = dc_[c];
    isi[c] = initial_spread_index(ffmc_[c], w);
    bui[c] = buildup_index(dmc_[c], dc_[c]);
    fwi[c] = fire_weather_index(isi[c], bui[c]);
    dsr[c] = daily_severity_rating(fwi[c]);
  }
  if (clamped) log::warn("relative humidity outside [0, 100] clamped in raster FWI step");
}

}  // namespace firerisk::fwi
