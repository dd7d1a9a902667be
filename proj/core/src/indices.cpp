#include "firerisk/indices.hpp"

#include <algorithm>
#include <cmath>

#include "firerisk/error.hpp"
#include "firerisk/log.hpp"

namespace firerisk {

double angstroem_index(double temperature_c, double relative_humidity) noexcept {
  return relative_humidity / 20.0 + (27.0 - temperature_c) / 10.0;
}

SimpleIndices simple_indices_step(SimpleIndexState& s, const SimpleIndexWeather& w, const SimpleIndexParams& p) {
  const double rain = std::max(w.rain_mm, 0.0);

  if (rain > p.nesterov_reset_mm) {
    s.nesterov = 0.0;
  } else if (w.temperature_c > 0.0) {
    s.nesterov += w.temperature_c * std::max(w.temperature_c - w.dew_point_c, 0.0);
  }

  s.munger_dry_days = rain >= p.munger_reset_mm ? 0 : s.munger_dry_days + 1;

  // Keetch-Byram drought index, metric form (mm of soil water deficit, 0..203.2).
  constexpr double kMaxDeficit = 203.2;
  if (rain > 0.0) {
    const double before = s.kbdi_spell_rain_mm;
    s.kbdi_spell_rain_mm += rain;
    const double net = before >= p.kbdi_interception_mm ? rain : std::max(s.kbdi_spell_rain_mm - p.kbdi_interception_mm, 0.0);
    s.kbdi_mm = std::max(s.kbdi_mm - net, 0.0);
  } else {
    s.kbdi_spell_rain_mm = 0.0;
  }
  const double drying = (kMaxDeficit - s.kbdi_mm) * (0.968 * std::exp(0.0875 * w.temperature_c + 1.5552) - 8.30) /
                        (1.0 + 10.88 * std::exp(-0.001736 * p.kbdi_annual_rain_mm)) * 1e-3;
  s.kbdi_mm = std::clamp(s.kbdi_mm + std::max(drying, 0.0), 0.0, kMaxDeficit);

  SimpleIndices out;
  out.nesterov = s.nesterov;
  out.munger = 0.5 * static_cast<double>(s.munger_dry_days) * static_cast<double>(s.munger_dry_days);
  out.kbdi = s.kbdi_mm;
  out.angstroem = angstroem_index(w.temperature_c, w.relative_humidity);
  return out;
}

IndexState annual_reset(const IndexState& state, Date date, MonthDay season_start) {
  if (!season_start.matches(date)) return state;
  IndexState s;
  s.fwi.day_of_year = static_cast<int>(date.day_of_year());
  s.fwi.last_reset_year = date.year();
  return s;
}

double precip_index(std::span<const double> p, std::size_t t, int window) noexcept {
  double sum = 0.0;
  for (int d = 0; d < window && static_cast<std::size_t>(d) <= t; ++d) {
    sum += p[t - static_cast<std::size_t>(d)] * static_cast<double>(window - d) / window;
  }
  return sum;
}

PrecipFeatures precip_features(std::span<const double> p, double threshold, int cap) {
  const std::size_t n = p.size();
  PrecipFeatures f;
  f.rain_24h.assign(p.begin(), p.end());
  f.rain_sum_7d.resize(n);
  f.days_since_rain.resize(n);
  f.precip_index_3d.resize(n);
  f.precip_index_5d.resize(n);
  f.precip_index_9d.resize(n);
  int since = cap;
  for (std::size_t t = 0; t < n; ++t) {
    double sum7 = 0.0;
    for (std::size_t d = 0; d < 7 && d <= t; ++d) sum7 += p[t - d];
    f.rain_sum_7d[t] = sum7;

    since = p[t] > threshold ? 0 : std::min(since + 1, cap);
    f.days_since_rain[t] = since;
    f.precip_index_3d[t] = precip_index(p, t, 3);
    f.precip_index_5d[t] = precip_index(p, t, 5);
    f.precip_index_9d[t] = precip_index(p, t, 9);
  }
  return f;
}

const std::vector<std::string>& index_feature_names() {
  static const std::vector<std::string> names = {
      "rh_12h",   "rh_16h",        "ffmc",        "dmc",         "dc",
      "isi",      "bui",           "fwi",         "dsr",         "nesterov",
      "munger",   "kbdi",          "angstroem",   "days_since_rain", "rain_24h",
      "rain_sum_7d", "precip_index_3d", "precip_index_5d", "precip_index_9d"};
  return names;
}

DataCube compute_indices(const DataCube& cube, const IndexOptions& opt) {
  auto hour_tag = [](int h) {
    if (h != 12 && h != 16) throw ValidationError("observation hour must be 12 or 16");
    return "_" + std::to_string(h) + "h";
  };
  const std::string fh = hour_tag(opt.fwi_hour);
  const std::string dh = hour_tag(opt.dryness_hour);
  const std::size_t f_temp = cube.feature_index("temp_c" + fh);
  const std::size_t f_dew = cube.feature_index("dew_c" + fh);
  const std::size_t f_wind = cube.feature_index("wind_kmh" + fh);
  const std::size_t f_rain = cube.feature_index("precip_mm" + fh);
  const std::size_t d_temp = cube.feature_index("temp_c" + dh);
  const std::size_t d_dew = cube.feature_index("dew_c" + dh);
  const std::size_t t12 = cube.feature_index("temp_c_12h");
  const std::size_t d12 = cube.feature_index("dew_c_12h");
  const std::size_t t16 = cube.feature_index("temp_c_16h");
  const std::size_t d16 = cube.feature_index("dew_c_16h");

  const std::size_t nt = cube.n_time();
  const std::size_t nc = cube.n_cells();
  const auto& names = index_feature_names();
  const std::size_t ng = names.size();
  std::vector<float> out(nt * nc * ng);

  auto value = [&](std::size_t t, std::size_t c, std::size_t f) {
    return static_cast<double>(cube.values()[(t * nc + c) * cube.n_features() + f]);
  };

  // Rain features are per-cell series.
  std::vector<double> series(nt);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t t = 0; t < nt; ++t) series[t] = value(t, c, f_rain);
    const PrecipFeatures pf = precip_features(series, opt.rain_threshold_mm);
    for (std::size_t t = 0; t < nt; ++t) {
      float* row = &out[(t * nc + c) * ng];
      row[13] = static_cast<float>(pf.days_since_rain[t]);
      row[14] = static_cast<float>(pf.rain_24h[t]);
      row[15] = static_cast<float>(pf.rain_sum_7d[t]);
      row[16] = static_cast<float>(pf.precip_index_3d[t]);
      row[17] = static_cast<float>(pf.precip_index_5d[t]);
      row[18] = static_cast<float>(pf.precip_index_9d[t]);
    }
  }

  fwi::FwiRaster raster(nc);
  std::vector<SimpleIndexState> simple(nc);
  std::vector<double> temp(nc), rh(nc), wind(nc), rain(nc);
  std::vector<double> ffmc(nc), dmc(nc), dc(nc), isi(nc), bui(nc), fwi_v(nc), dsr(nc);
  bool rh_clamped = false;
  auto clamp_rh = [&](double h) {
    if (!(h >= 0.0 && h <= 100.0)) {
      rh_clamped = true;
      return std::clamp(h, 0.0, 100.0);
    }
    return h;
  };

  for (std::size_t t = 0; t < nt; ++t) {
    const Date date = cube.dates()[t];
    if (opt.season_start.matches(date)) {
      raster.reset();
      std::fill(simple.begin(), simple.end(), SimpleIndexState{});
    }
    for (std::size_t c = 0; c < nc; ++c) {
      temp[c] = value(t, c, f_temp);
      rh[c] = clamp_rh(fwi::relative_humidity_magnus(temp[c], value(t, c, f_dew)));
      wind[c] = value(t, c, f_wind);
      rain[c] = value(t, c, f_rain);
    }
    raster.step(temp, rh, wind, rain, static_cast<int>(date.month()), ffmc, dmc, dc, isi, bui, fwi_v, dsr);
    for (std::size_t c = 0; c < nc; ++c) {
      SimpleIndexWeather w;
      w.temperature_c = value(t, c, d_temp);
      w.dew_point_c = value(t, c, d_dew);
      w.relative_humidity = clamp_rh(fwi::relative_humidity_magnus(w.temperature_c, w.dew_point_c));
      w.rain_mm = rain[c];
      const SimpleIndices si = simple_indices_step(simple[c], w, opt.simple);

      float* row = &out[(t * nc + c) * ng];
      row[0] = static_cast<float>(clamp_rh(fwi::relative_humidity_magnus(value(t, c, t12), value(t, c, d12))));
      row[1] = static_cast<float>(clamp_rh(fwi::relative_humidity_magnus(value(t, c, t16), value(t, c, d16))));
      row[2] = static_cast<float>(ffmc[c]);
      row[3] = static_cast<float>(dmc[c]);
      row[4] = static_cast<float>(dc[c]);
      row[5] = static_cast<float>(isi[c]);
      row[6] = static_cast<float>(bui[c]);
      row[7] = static_cast<float>(fwi_v[c]);
      row[8] = static_cast<float>(dsr[c]);
      row[9] = static_cast<float>(si.nesterov);
      row[10] = static_cast<float>(si.munger);
      row[11] = static_cast<float>(si.kbdi);
      row[12] = static_cast<float>(si.angstroem);
    }
  }
  if (rh_clamped) log::warn("cube " + cube.department_id() + ": relative humidity outside [0, 100] was clamped");
  return cube.with_features(names, out);
}

}  // namespace firerisk
