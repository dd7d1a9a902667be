#include "firerisk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "firerisk/error.hpp"
#include "firerisk/csv.hpp"
#include "firerisk/random.hpp"

namespace firerisk {

namespace fs = std::filesystem;

Regime Regime::mediterranean() {
  Regime r;
  r.name = "mediterranean";
  r.ignition_rate = 3.0;
  r.seasonal_amplitude = 0.9;
  r.weather_coupling = 0.8;
  r.mean_burned_area_ha = 8.0;
  r.temperature_mean_c = 15.5;
  r.temperature_amplitude_c = 9.0;
  r.rain_probability = 0.22;
  r.mean_rain_mm = 8.0;
  return r;
}

Regime Regime::low_risk() {
  Regime r;
  r.name = "low_risk";
  r.ignition_rate = 0.3;
  r.seasonal_amplitude = 0.0;
  r.weather_coupling = 0.5;
  r.mean_burned_area_ha = 2.0;
  r.temperature_mean_c = 11.5;
  r.temperature_amplitude_c = 6.5;
  r.rain_probability = 0.45;
  r.mean_rain_mm = 6.0;
  return r;
}

const std::vector<std::string>& synthetic_static_layer_names() {
  static const std::vector<std::string> names = {"elevation_m", "forest_fraction", "landcover", "population",
                                                 "highway_km"};
  return names;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kLandcoverCodes[] = {112, 211, 231, 242, 311, 312, 313, 321, 323, 324, 333, 512};

struct DeptWeather {
  std::vector<double> temp, dew, rain, wind, wind_dir, snow, dry_days, anomaly;
};

DeptWeather simulate_weather(const Regime& regime, DateRange period, Rng& rng) {
  const auto n = static_cast<std::size_t>(period.size());
  DeptWeather w;
  for (auto* v : {&w.temp, &w.dew, &w.rain, &w.wind, &w.wind_dir, &w.snow, &w.dry_days, &w.anomaly}) v->resize(n);
  double anomaly = 0.0, snow = 0.0, dry = 10.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Date d = period.first + static_cast<std::int32_t>(t);
    const double season = std::cos(kTwoPi * (static_cast<double>(d.day_of_year()) - 200.0) / 365.25);
    anomaly = 0.7 * anomaly + rng.normal(0.0, 2.5);
    const double temp = regime.temperature_mean_c + regime.temperature_amplitude_c * season + anomaly;
    const double p_rain = std::clamp(regime.rain_probability * (1.0 - 0.6 * season), 0.02, 0.95);
    const double rain = rng.uniform() < p_rain ? rng.exponential(regime.mean_rain_mm) : 0.0;
    dry = rain > 1.0 ? 0.0 : dry + 1.0;
    const double depression =
        std::max(0.5, 2.0 + 0.25 * std::max(temp, 0.0) + 0.4 * std::min(dry, 20.0) + rng.normal(0.0, 1.0));
    snow = (temp < 0.0 && rain > 0.0) ? snow + rain : snow * 0.8;
    if (snow < 0.05) snow = 0.0;
    w.temp[t] = temp;
    w.dew[t] = temp - depression;
    w.rain[t] = rain;
    w.wind[t] = std::abs(rng.normal(12.0, 6.0));
    w.wind_dir[t] = rng.uniform(0.0, 360.0);
    w.snow[t] = snow;
    w.dry_days[t] = dry;
    w.anomaly[t] = anomaly;
  }
  return w;
}

std::vector<double> standardized(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(v.size()));
  std::vector<double> z(v.size(), 0.0);
  if (sd > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - mean) / sd;
  }
  return z;
}

}  // namespace

SyntheticRegion generate_synthetic_region(const SynthConfig& config) {
  if (config.n_years < 2) throw ValidationError("synthetic region needs n_years >= 2 for temporal splits");
  if (config.n_departments < 1) throw ValidationError("synthetic region needs at least one department");
  if (config.cities_per_department < 1) throw ValidationError("synthetic region needs at least one city");

  std::vector<Regime> regimes = config.regimes;
  if (regimes.empty()) regimes = {Regime::mediterranean(), Regime::low_risk()};

  SyntheticRegion region;
  region.period = DateRange{Date::from_ymd(config.start_year, 1, 1),
                            Date::from_ymd(config.start_year + config.n_years - 1, 12, 31)};
  const auto n_days = static_cast<std::size_t>(region.period.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int di = 0; di < config.n_departments; ++di) {
    const Regime& regime = regimes[static_cast<std::size_t>(di) % regimes.size()];
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(di)));

    SyntheticDepartment dept;
    char id[16];
    std::snprintf(id, sizeof id, "D%02d", di + 1);
    dept.id = id;
    dept.regime = regime.name;
    dept.grid.department_id = dept.id;
    dept.grid.origin_x = 700000.0 + 60000.0 * di;
    dept.grid.origin_y = 6400000.0;
    dept.grid.n_x = config.n_x;
    dept.grid.n_y = config.n_y;
    dept.grid.validate();
    const std::size_t nc = dept.grid.cell_count();

    // Static layers.
    const auto& static_names = synthetic_static_layer_names();
    for (const auto& name : static_names) {
      FeatureLayer l;
      l.name = name;
      l.n_y = config.n_y;
      l.n_x = config.n_x;
      l.values.resize(nc);
      dept.static_layers.push_back(std::move(l));
    }
    const double phase = rng.uniform(0.0, kTwoPi);
    for (int y = 0; y < config.n_y; ++y) {
      for (int x = 0; x < config.n_x; ++x) {
        const std::size_t c = dept.grid.flat(Cell{y, x});
        dept.static_layers[0].values[c] = 250.0 + 180.0 * std::sin(0.9 * y + phase) * std::cos(0.7 * x) +
                                          rng.normal(0.0, 20.0);
        dept.static_layers[1].values[c] = std::clamp(rng.uniform(0.05, 0.85), 0.0, 1.0);
        dept.static_layers[2].values[c] = kLandcoverCodes[rng.below(std::size(kLandcoverCodes))];
        dept.static_layers[3].values[c] = std::round(std::exp(rng.normal(4.0, 1.2)));
        dept.static_layers[4].values[c] = std::round(rng.uniform(0.0, 6.0) * 100.0) / 100.0;
      }
    }

    // Cities.
    std::vector<double> city_weight;
    for (int k = 0; k < config.cities_per_department; ++k) {
      char ref[32];
      std::snprintf(ref, sizeof ref, "%s-C%02d", dept.id.c_str(), k + 1);
      const double x = dept.grid.origin_x + rng.uniform(0.01, 0.99) * config.n_x * GridSpec::kCellSizeM;
      const double y = dept.grid.origin_y - rng.uniform(0.01, 0.99) * config.n_y * GridSpec::kCellSizeM;
      dept.cities.push_back({ref, std::round(x), std::round(y)});
      city_weight.push_back(rng.uniform(0.5, 1.5));
    }
    double weight_total = 0.0;
    for (double w : city_weight) weight_total += w;

    // Weather.
    const DeptWeather w = simulate_weather(regime, region.period, rng);
    std::vector<double> lattice_offset(kWeatherLatticeSize * kWeatherLatticeSize);
    for (int r = 0; r < kWeatherLatticeSize; ++r) {
      for (int c = 0; c < kWeatherLatticeSize; ++c) {
        lattice_offset[static_cast<std::size_t>(r * kWeatherLatticeSize + c)] =
            -0.0065 * (100.0 * std::sin(r / 3.0 + phase) + 80.0 * std::cos(c / 4.0));
      }
    }
    auto maybe_missing = [&](double v) { return rng.uniform() < config.missing_fraction ? nan : v; };
    for (std::size_t t = 0; t < n_days; ++t) {
      const Date d = region.period.first + static_cast<std::int32_t>(t);
      for (int hour : {12, 16}) {
        const double dt = hour == 16 ? 2.5 : 0.0;
        const double wind_mult = hour == 16 ? 1.2 : 1.0;
        for (int r = 0; r < kWeatherLatticeSize; ++r) {
          for (int c = 0; c < kWeatherLatticeSize; ++c) {
            const double off = lattice_offset[static_cast<std::size_t>(r * kWeatherLatticeSize + c)];
            WeatherRecord rec;
            rec.date = d;
            rec.department_id = dept.id;
            rec.grid_point = Cell{r, c};
            rec.observation_hour = hour;
            const double temp = w.temp[t] + dt + off + rng.normal(0.0, 0.3);
            rec.temperature_c = maybe_missing(std::round(temp * 10.0) / 10.0);
            rec.dew_point_c = maybe_missing(std::round(std::min(w.dew[t] + off + rng.normal(0.0, 0.3), temp) * 10.0) /
                                            10.0);
            rec.precipitation_mm = maybe_missing(std::round(w.rain[t] * rng.uniform(0.8, 1.2) * 10.0) / 10.0);
            rec.wind_speed_kmh = maybe_missing(std::round(w.wind[t] * wind_mult * rng.uniform(0.9, 1.1) * 10.0) / 10.0);
            rec.wind_direction_deg = std::round(w.wind_dir[t]);
            rec.snow_height_cm = std::round(w.snow[t] * 10.0) / 10.0;
            region.weather.push_back(std::move(rec));
          }
        }
      }
    }

    // Ignitions: seasonal profile with annual mean 1, modulated by hot dry
    // spells, rescaled so the period mean equals the configured rate.
    const auto z_anom = standardized(w.anomaly);
    std::vector<double> dry_capped(n_days);
    for (std::size_t t = 0; t < n_days; ++t) dry_capped[t] = std::min(w.dry_days[t], 15.0);
    const auto z_dry = standardized(dry_capped);
    std::vector<double> raw(n_days);
    std::vector<double> z(n_days);
    double raw_mean = 0.0;
    for (std::size_t t = 0; t < n_days; ++t) {
      const Date d = region.period.first + static_cast<std::int32_t>(t);
      const double s =
          1.0 + regime.seasonal_amplitude *
                    std::cos(kTwoPi * (static_cast<double>(d.day_of_year()) - regime.peak_day_of_year) / 365.25);
      z[t] = 0.5 * z_anom[t] + 0.5 * z_dry[t];
      raw[t] = s * std::exp(regime.weather_coupling * z[t]);
      raw_mean += raw[t];
    }
    raw_mean /= static_cast<double>(n_days);
    for (std::size_t t = 0; t < n_days; ++t) {
      const double lambda = raw_mean > 0.0 ? regime.ignition_rate * raw[t] / raw_mean : 0.0;
      const int count = rng.poisson(lambda);
      const Date d = region.period.first + static_cast<std::int32_t>(t);
      for (int k = 0; k < count; ++k) {
        double pick = rng.uniform() * weight_total;
        std::size_t city = 0;
        while (city + 1 < city_weight.size() && pick >= city_weight[city]) {
          pick -= city_weight[city];
          ++city;
        }
        const double mu = std::log(regime.mean_burned_area_ha) - 0.72 + 0.4 * z[t];
        const double ba = std::max(0.01, std::round(std::exp(rng.normal(mu, 1.2)) * 100.0) / 100.0);
        region.events.push_back(FireEvent{d, dept.id, dept.cities[city].location_ref, ba});
      }
    }
    region.departments.push_back(std::move(dept));
  }

  std::stable_sort(region.events.begin(), region.events.end(),
                   [](const FireEvent& a, const FireEvent& b) { return a.date < b.date; });
  std::stable_sort(region.weather.begin(), region.weather.end(),
                   [](const WeatherRecord& a, const WeatherRecord& b) { return a.date < b.date; });
  return region;
}

void write_synthetic_region(const SyntheticRegion& region, const fs::path& dir) {
  fs::create_directories(dir / "static");
  write_events_csv(region.events, dir / "events.csv");
  write_weather_csv(region.weather, dir / "weather.csv");
  std::map<std::string, GridSpec> grids;
  for (const auto& d : region.departments) grids.emplace(d.id, d.grid);
  write_grids_csv(grids, dir / "grids.csv");

  CsvWriter gaz(dir / "gazetteer.csv");
  gaz.row({"location_ref", "department", "x", "y"});
  for (const auto& d : region.departments) {
    for (const auto& c : d.cities) {
      gaz.field(c.location_ref).field(d.id).field(c.x).field(c.y);
      gaz.end_row();
    }
  }
  gaz.close();

  for (const auto& d : region.departments) write_static_layers_csv(d.static_layers, d.grid, dir / "static" / (d.id + ".csv"));
}

}  // namespace firerisk
