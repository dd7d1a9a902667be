#include "firerisk/ingest.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"

namespace firerisk {

namespace {

constexpr std::size_t kWeatherVars = 6;
constexpr std::size_t kLatticePoints = kWeatherLatticeSize * kWeatherLatticeSize;

std::string join_lines(const std::vector<std::string>& items, std::size_t limit = 100) {
  std::string s;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) s += "\n  " + items[i];
  if (items.size() > limit) s += "\n  ... and " + std::to_string(items.size() - limit) + " more";
  return s;
}

}  // namespace

void WeatherRecord::validate() const {
  if (grid_point.row < 0 || grid_point.row >= kWeatherLatticeSize || grid_point.col < 0 ||
      grid_point.col >= kWeatherLatticeSize) {
    throw ValidationError("weather lattice point (" + std::to_string(grid_point.row) + "," +
                          std::to_string(grid_point.col) + ") outside [0,10]");
  }
  if (observation_hour != 12 && observation_hour != 16) {
    throw ValidationError("observation hour must be 12 or 16, got " + std::to_string(observation_hour));
  }
}

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Excluded: return "excluded";
  }
  return "excluded";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  if (s == "excluded") return Split::Excluded;
  throw ValidationError("unknown split '" + std::string(s) + "'");
}

TemporalSplit::TemporalSplit(std::set<int> train, std::set<int> val, std::set<int> test)
    : train_(std::move(train)), val_(std::move(val)), test_(std::move(test)) {
  auto overlap = [](const std::set<int>& a, const std::set<int>& b, const char* na, const char* nb) {
    for (int y : a) {
      if (b.count(y)) {
        throw ValidationError("year " + std::to_string(y) + " is in both " + na + " and " + nb + " splits");
      }
    }
  };
  overlap(train_, val_, "train", "val");
  overlap(train_, test_, "train", "test");
  overlap(val_, test_, "val", "test");
}

TemporalSplit TemporalSplit::france_2017_2024() {
  return TemporalSplit({2017, 2018, 2019, 2020, 2022}, {2021, 2024}, {2023});
}

Split TemporalSplit::assign(Date d) const noexcept {
  const int y = d.year();
  if (train_.count(y)) return Split::Train;
  if (val_.count(y)) return Split::Val;
  if (test_.count(y)) return Split::Test;
  return Split::Excluded;
}

DailyRasters rasterize_events(const std::vector<FireEvent>& events, const GridSpec& grid, const Gazetteer& gazetteer,
                              DateRange period) {
  grid.validate();
  DailyRasters r;
  r.period = period;
  r.n_y = grid.n_y;
  r.n_x = grid.n_x;
  const std::size_t nc = r.cells();
  const std::size_t nd = static_cast<std::size_t>(std::max(period.size(), 0));
  r.counts.assign(nd * nc, 0);
  r.burned_area_ha.assign(nd * nc, 0.0);

  std::vector<std::string> rejected;
  for (const auto& e : events) {
    if (e.department_id != grid.department_id) continue;
    const std::string tag = e.date.iso() + "," + e.department_id + "," + e.location_ref;
    auto it = gazetteer.find(e.location_ref);
    if (it == gazetteer.end()) {
      rejected.push_back(tag + ": unresolvable location_ref");
      continue;
    }
    if (!grid.contains(it->second)) {
      rejected.push_back(tag + ": gazetteer cell outside grid");
      continue;
    }
    if (!period.contains(e.date)) {
      rejected.push_back(tag + ": date outside " + period.first.iso() + ".." + period.last.iso());
      continue;
    }
    if (!(e.burned_area_ha >= 0.0)) {
      rejected.push_back(tag + ": negative burned area");
      continue;
    }
    const std::size_t idx = static_cast<std::size_t>(e.date - period.first) * nc + grid.flat(it->second);
    r.counts[idx] += 1;
    r.burned_area_ha[idx] += e.burned_area_ha;
  }
  if (!rejected.empty()) {
    throw ValidationError("rejected " + std::to_string(rejected.size()) + " fire event(s):" + join_lines(rejected));
  }
  return r;
}

const std::vector<std::string>& weather_layer_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const char* hour : {"12h", "16h"}) {
      for (const char* v : {"temp_c", "dew_c", "precip_mm", "wind_kmh", "wind_dir_deg", "snow_cm"}) {
        n.push_back(std::string(v) + "_" + hour);
      }
    }
    return n;
  }();
  return names;
}

std::vector<FeatureLayer> weather_layers(const std::vector<WeatherRecord>& records, const GridSpec& grid,
                                         DateRange period) {
  grid.validate();
  const std::size_t nd = static_cast<std::size_t>(period.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // [day][hour][lattice point][var]
  std::vector<double> lattice(nd * 2 * kLatticePoints * kWeatherVars, nan);
  auto lat_at = [&](std::size_t d, std::size_t h, std::size_t p, std::size_t v) -> double& {
    return lattice[((d * 2 + h) * kLatticePoints + p) * kWeatherVars + v];
  };
  for (const auto& rec : records) {
    if (rec.department_id != grid.department_id || !period.contains(rec.date)) continue;
    rec.validate();
    const std::size_t d = static_cast<std::size_t>(rec.date - period.first);
    const std::size_t h = rec.observation_hour == 12 ? 0 : 1;
    const std::size_t p = static_cast<std::size_t>(rec.grid_point.row * kWeatherLatticeSize + rec.grid_point.col);
    const double vals[kWeatherVars] = {rec.temperature_c,  rec.dew_point_c,        rec.precipitation_mm,
                                       rec.wind_speed_kmh, rec.wind_direction_deg, rec.snow_height_cm};
    for (std::size_t v = 0; v < kWeatherVars; ++v) lat_at(d, h, p, v) = vals[v];
  }

  std::vector<Date> dates(nd);
  for (std::size_t d = 0; d < nd; ++d) dates[d] = period.first + static_cast<std::int32_t>(d);

  const std::size_t nc = grid.cell_count();
  std::vector<std::size_t> nearest(nc);
  for (int y = 0; y < grid.n_y; ++y) {
    for (int x = 0; x < grid.n_x; ++x) {
      const Cell p = nearest_weather_point(grid, Cell{y, x});
      nearest[grid.flat(Cell{y, x})] = static_cast<std::size_t>(p.row * kWeatherLatticeSize + p.col);
    }
  }

  std::vector<FeatureLayer> layers;
  const auto& names = weather_layer_names();
  for (std::size_t h = 0; h < 2; ++h) {
    for (std::size_t v = 0; v < kWeatherVars; ++v) {
      FeatureLayer l;
      l.name = names[h * kWeatherVars + v];
      l.dates = dates;
      l.n_y = grid.n_y;
      l.n_x = grid.n_x;
      l.values.resize(nd * nc);
      for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t c = 0; c < nc; ++c) l.values[d * nc + c] = lat_at(d, h, nearest[c], v);
      }
      layers.push_back(std::move(l));
    }
  }
  return layers;
}

std::vector<FireEvent> read_events_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"date", "department", "location_ref", "burned_area_ha"});
  std::vector<FireEvent> out;
  CsvRow row;
  while (in.next(row)) {
    FireEvent e;
    e.date = in.date(row, 0);
    e.department_id = in.text(row, 1);
    e.location_ref = in.text(row, 2);
    e.burned_area_ha = in.number(row, 3);
    if (!(e.burned_area_ha >= 0.0)) in.fail(row, "burned_area_ha must be a non-negative number");
    out.push_back(std::move(e));
  }
  return out;
}

void write_events_csv(const std::vector<FireEvent>& events, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"date", "department", "location_ref", "burned_area_ha"});
  for (const auto& e : events) {
    out.field(e.date).field(e.department_id).field(e.location_ref).field(e.burned_area_ha);
    out.end_row();
  }
  out.close();
}

std::vector<WeatherRecord> read_weather_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"date", "department", "row", "col", "hour", "temp_c", "dew_c", "precip_mm", "wind_kmh",
                    "wind_dir_deg", "snow_cm"});
  std::vector<WeatherRecord> out;
  CsvRow row;
  while (in.next(row)) {
    WeatherRecord r;
    r.date = in.date(row, 0);
    r.department_id = in.text(row, 1);
    r.grid_point = Cell{static_cast<int>(in.integer(row, 2)), static_cast<int>(in.integer(row, 3))};
    r.observation_hour = static_cast<int>(in.integer(row, 4));
    r.temperature_c = in.number(row, 5);
    r.dew_point_c = in.number(row, 6);
    r.precipitation_mm = in.number(row, 7);
    r.wind_speed_kmh = in.number(row, 8);
    r.wind_direction_deg = in.number(row, 9);
    r.snow_height_cm = in.number(row, 10);
    try {
      r.validate();
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_weather_csv(const std::vector<WeatherRecord>& records, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"date", "department", "row", "col", "hour", "temp_c", "dew_c", "precip_mm", "wind_kmh", "wind_dir_deg",
           "snow_cm"});
  auto num = [&](double v) -> CsvWriter& { return std::isnan(v) ? out.field(std::string_view{}) : out.field(v); };
  for (const auto& r : records) {
    out.field(r.date).field(r.department_id).field(r.grid_point.row).field(r.grid_point.col).field(r.observation_hour);
    num(r.temperature_c);
    num(r.dew_point_c);
    num(r.precipitation_mm);
    num(r.wind_speed_kmh);
    num(r.wind_direction_deg);
    num(r.snow_height_cm);
    out.end_row();
  }
  out.close();
}

std::vector<FeatureLayer> read_static_layers_csv(const std::filesystem::path& path, const GridSpec& grid) {
  CsvReader in(path);
  in.expect_prefix({"row", "col"});
  const auto& header = in.header();
  const std::size_t nl = header.size() - 2;
  const std::size_t nc = grid.cell_count();
  std::vector<FeatureLayer> layers(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    layers[l].name = header[l + 2];
    layers[l].n_y = grid.n_y;
    layers[l].n_x = grid.n_x;
    layers[l].values.assign(nc, std::numeric_limits<double>::quiet_NaN());
  }
  std::vector<bool> seen(nc, false);
  CsvRow row;
  while (in.next(row)) {
    const Cell c{static_cast<int>(in.integer(row, 0)), static_cast<int>(in.integer(row, 1))};
    if (!grid.contains(c)) in.fail(row, "cell outside grid");
    const std::size_t i = grid.flat(c);
    if (seen[i]) in.fail(row, "duplicate cell");
    seen[i] = true;
    for (std::size_t l = 0; l < nl; ++l) layers[l].values[i] = in.number(row, l + 2);
  }
  for (std::size_t i = 0; i < nc; ++i) {
    if (!seen[i]) {
      throw ValidationError(path.string() + ": missing cell " + std::to_string(i / grid.n_x) + "," +
                            std::to_string(i % grid.n_x));
    }
  }
  return layers;
}

void write_static_layers_csv(const std::vector<FeatureLayer>& layers, const GridSpec& grid,
                             const std::filesystem::path& path) {
  CsvWriter out(path);
  out.field("row").field("col");
  for (const auto& l : layers) out.field(l.name);
  out.end_row();
  for (int y = 0; y < grid.n_y; ++y) {
    for (int x = 0; x < grid.n_x; ++x) {
      out.field(y).field(x);
      for (const auto& l : layers) out.field(l.values[grid.flat(Cell{y, x})]);
      out.end_row();
    }
  }
  out.close();
}

}  // namespace firerisk
