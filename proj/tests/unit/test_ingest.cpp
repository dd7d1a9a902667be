#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "firerisk/cube.hpp"
#include "firerisk/cube_io.hpp"
#include "firerisk/error.hpp"
#include "firerisk/ingest.hpp"
#include "firerisk/labeling.hpp"
#include "firerisk/synth.hpp"
#include "support/generators.hpp"
#include "support/temp_dir.hpp"

using namespace firerisk;
using testing_support::TempDir;

namespace {

GridSpec grid_3x2() {
  GridSpec g;
  g.department_id = "D1";
  g.origin_x = 0.0;
  g.origin_y = 10000.0;
  g.n_x = 3;
  g.n_y = 2;
  return g;
}

FeatureLayer dated_layer(const std::string& name, Date first, int days, int ny, int nx, double base) {
  FeatureLayer l;
  l.name = name;
  l.n_y = ny;
  l.n_x = nx;
  for (int d = 0; d < days; ++d) l.dates.push_back(first + d);
  for (int i = 0; i < days * ny * nx; ++i) l.values.push_back(base + i);
  return l;
}

}  // namespace

TEST(Grid, ValidatesCellSize) {
  GridSpec g = grid_3x2();
  EXPECT_NO_THROW(g.validate());
  g.cell_size_m = 1000.0;
  EXPECT_THROW(g.validate(), ValidationError);
  g = grid_3x2();
  g.n_x = 0;
  EXPECT_THROW(g.validate(), ValidationError);
}

TEST(Grid, SnapToNearestCenter) {
  const GridSpec g = grid_3x2();
  EXPECT_EQ(g.snap(100.0, 9900.0), (Cell{0, 0}));
  EXPECT_EQ(g.snap(5999.0, 6001.0), (Cell{1, 2}));
  EXPECT_THROW(g.snap(-1.0, 9000.0), ValidationError);
}

TEST(Rasterize, NoEventsGivesZeroRasters) {
  const GridSpec g = grid_3x2();
  const DateRange period{Date::parse("2023-01-01"), Date::parse("2023-01-05")};
  const DailyRasters r = rasterize_events({}, g, {}, period);
  EXPECT_EQ(r.counts.size(), 5u * 6u);
  for (auto c : r.counts) EXPECT_EQ(c, 0);
  for (auto b : r.burned_area_ha) EXPECT_EQ(b, 0.0);
}

TEST(Rasterize, SameCellEventsAdd) {
  const GridSpec g = grid_3x2();
  const Gazetteer gz = {{"A", Cell{1, 1}}};
  const Date d = Date::parse("2023-06-01");
  const std::vector<FireEvent> ev = {{d, "D1", "A", 1.5}, {d, "D1", "A", 2.5}};
  const DailyRasters r = rasterize_events(ev, g, gz, {d, d});
  EXPECT_EQ(r.counts[g.flat({1, 1})], 2);
  EXPECT_DOUBLE_EQ(r.burned_area_ha[g.flat({1, 1})], 4.0);
}

TEST(Rasterize, PerDaySumsMatchTally) {
  const GridSpec g = grid_3x2();
  const Gazetteer gz = {{"A", Cell{0, 0}}, {"B", Cell{1, 2}}, {"C", Cell{0, 1}}};
  const Date d0 = Date::parse("2023-06-01");
  const std::vector<FireEvent> ev = {{d0, "D1", "A", 1.0},     {d0, "D1", "B", 0.5},     {d0 + 1, "D1", "C", 3.0},
                                     {d0 + 2, "D1", "A", 0.25}, {d0 + 2, "D1", "A", 2.0}, {d0, "OTHER", "X", 9.0}};
  const DateRange period{d0, d0 + 2};
  const DailyRasters r = rasterize_events(ev, g, gz, period);

  std::map<Date, std::pair<int, double>> tally;
  for (const auto& e : ev) {
    if (e.department_id != "D1") continue;
    tally[e.date].first += 1;
    tally[e.date].second += e.burned_area_ha;
  }
  for (int t = 0; t < period.size(); ++t) {
    int n = 0;
    double ba = 0.0;
    for (std::size_t c = 0; c < r.cells(); ++c) {
      n += r.counts[static_cast<std::size_t>(t) * r.cells() + c];
      ba += r.burned_area_ha[static_cast<std::size_t>(t) * r.cells() + c];
    }
    EXPECT_EQ(n, tally[period.first + t].first);
    EXPECT_DOUBLE_EQ(ba, tally[period.first + t].second);
  }
}

TEST(Rasterize, UnknownLocationListsEveryOffender) {
  const GridSpec g = grid_3x2();
  const Gazetteer gz = {{"A", Cell{0, 0}}};
  const Date d = Date::parse("2023-06-01");
  const std::vector<FireEvent> ev = {{d, "D1", "nowhere", 1.0}, {d, "D1", "A", 1.0}, {d, "D1", "elsewhere", 1.0}};
  try {
    (void)rasterize_events(ev, g, gz, {d, d});
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("nowhere"), std::string::npos);
    EXPECT_NE(msg.find("elsewhere"), std::string::npos);
  }
}

TEST(Rasterize, MassConservationProperty) {
  gen::Source src(21);
  const GridSpec g = grid_3x2();
  Gazetteer gz;
  for (int i = 0; i < 6; ++i) gz["L" + std::to_string(i)] = Cell{i / 3, i % 3};
  const Date d0 = Date::parse("2022-01-01");
  const DateRange period{d0, d0 + 29};
  for (int round = 0; round < 50; ++round) {
    std::vector<FireEvent> ev;
    const int n = src.integer(0, 60);
    for (int i = 0; i < n; ++i) {
      ev.push_back({d0 + src.integer(0, 29), "D1", "L" + std::to_string(src.integer(0, 5)), src.uniform(0.0, 10.0)});
    }
    const DailyRasters r = rasterize_events(ev, g, gz, period);
    for (int t = 0; t < 30; ++t) {
      int want_n = 0;
      double want_ba = 0.0;
      for (const auto& e : ev) {
        if (e.date == d0 + t) {
          ++want_n;
          want_ba += e.burned_area_ha;
        }
      }
      int got_n = 0;
      double got_ba = 0.0;
      for (std::size_t c = 0; c < 6; ++c) {
        got_n += r.counts[static_cast<std::size_t>(t) * 6 + c];
        got_ba += r.burned_area_ha[static_cast<std::size_t>(t) * 6 + c];
      }
      EXPECT_EQ(got_n, want_n);
      EXPECT_NEAR(got_ba, want_ba, 1e-9);
    }
  }
}

TEST(BuildCube, MinimalShape) {
  GridSpec g = grid_3x2();
  g.n_x = 2;
  g.n_y = 2;
  const auto l = dated_layer("a", Date::parse("2023-01-01"), 1, 2, 2, 0.0);
  const DataCube c = build_cube("D1", {l}, g);
  EXPECT_EQ(c.n_time(), 1u);
  EXPECT_EQ(c.n_y(), 2u);
  EXPECT_EQ(c.n_x(), 2u);
  EXPECT_EQ(c.n_features(), 1u);
}

TEST(BuildCube, ShapeMismatchThrows) {
  const GridSpec g = grid_3x2();
  const auto a = dated_layer("a", Date::parse("2023-01-01"), 3, 2, 3, 0.0);
  const auto b = dated_layer("b", Date::parse("2023-01-01"), 3, 2, 2, 0.0);
  EXPECT_THROW(build_cube("D1", {a, b}, g), ShapeError);
}

TEST(BuildCube, DateGapNamesMissingDays) {
  const GridSpec g = grid_3x2();
  auto a = dated_layer("a", Date::parse("2023-01-01"), 5, 2, 3, 0.0);
  a.dates.erase(a.dates.begin() + 2);
  a.values.resize(4 * 6);
  try {
    (void)build_cube("D1", {a}, g);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("2023-01-03"), std::string::npos) << e.what();
  }
}

TEST(BuildCube, ValuesMatchSourceLayersCellByCell) {
  const GridSpec g = grid_3x2();
  const Date d0 = Date::parse("2023-03-01");
  std::vector<FeatureLayer> layers = {dated_layer("a", d0, 10, 2, 3, 0.0), dated_layer("b", d0, 10, 2, 3, 1000.0),
                                      dated_layer("c", d0, 10, 2, 3, -50.0)};
  const DataCube c = build_cube("D1", layers, g);
  ASSERT_EQ(c.feature_names(), (std::vector<std::string>{"a", "b", "c"}));
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t f = 0; f < 3; ++f) {
          const double want = layers[f].values[(t * 2 + y) * 3 + x];
          EXPECT_EQ(c.at(t, y, x, f), static_cast<float>(want));
        }
      }
    }
  }
}

TEST(BuildCube, StaticLayerBroadcasts) {
  const GridSpec g = grid_3x2();
  const Date d0 = Date::parse("2023-03-01");
  FeatureLayer s;
  s.name = "elev";
  s.n_y = 2;
  s.n_x = 3;
  s.values = {1, 2, 3, 4, 5, 6};
  const DataCube c = build_cube("D1", {dated_layer("a", d0, 4, 2, 3, 0.0), s}, g);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(c.at(t, 1, 2, 1), 6.0f);
}

TEST(Impute, ForwardFillThenTrainingMean) {
  const double nan = std::nan("");
  std::vector<double> s = {1.0, nan, nan, nan, nan, 5.0, nan};
  const std::vector<bool> use = {true, false, false, false, false, true, false};
  ASSERT_TRUE(impute_series(s, 3, use));
  EXPECT_EQ(s[1], 1.0);
  EXPECT_EQ(s[3], 1.0);
  EXPECT_EQ(s[4], 3.0);  // fourth consecutive gap falls back to the mean of 1 and 5
  EXPECT_EQ(s[6], 5.0);
  std::vector<double> none = {nan, nan};
  EXPECT_FALSE(impute_series(none, 3, {true, true}));
}

TEST(CubeIo, RoundTripIsBitExact) {
  TempDir tmp;
  gen::Source src(8);
  for (int round = 0; round < 100; ++round) {
    GridSpec g = grid_3x2();
    g.n_x = src.integer(1, 4);
    g.n_y = src.integer(1, 4);
    const int nt = src.integer(1, 5);
    const int nf = src.integer(1, 3);
    std::vector<Date> dates;
    for (int t = 0; t < nt; ++t) dates.push_back(Date::parse("2020-02-27") + t);
    std::vector<std::string> names;
    for (int f = 0; f < nf; ++f) names.push_back("f" + std::to_string(f));
    std::vector<float> v(static_cast<std::size_t>(nt * g.n_x * g.n_y * nf));
    for (auto& x : v) x = static_cast<float>(src.uniform(-1e4, 1e4));
    const DataCube c("D1", g, dates, names, v);
    store_cube(c, tmp / "cube");
    EXPECT_EQ(load_cube(tmp / "cube"), c);
  }
}

TEST(CubeIo, TruncatedPayloadIsIntegrityError) {
  TempDir tmp;
  const GridSpec g = grid_3x2();
  const DataCube c("D1", g, {Date::parse("2020-01-01")}, {"a"}, std::vector<float>(6, 1.0f));
  store_cube(c, tmp / "cube");
  const auto bin = tmp / "cube" / "values.bin";
  std::filesystem::resize_file(bin, std::filesystem::file_size(bin) - 1);
  EXPECT_THROW(load_cube(tmp / "cube"), IntegrityError);
}

TEST(CubeIo, CorruptHeaderIsIntegrityError) {
  TempDir tmp;
  const DataCube c("D1", grid_3x2(), {Date::parse("2020-01-01")}, {"a"}, std::vector<float>(6, 1.0f));
  store_cube(c, tmp / "cube");
  testing_support::write_text(tmp / "cube" / "meta.json", "{\"dims\": [1,");
  EXPECT_THROW(load_cube(tmp / "cube"), IntegrityError);
}

TEST(CubeIo, OneValueDifferenceChangesStoredBytes) {
  TempDir tmp;
  std::vector<float> v(6, 1.0f);
  const DataCube a("D1", grid_3x2(), {Date::parse("2020-01-01")}, {"a"}, v);
  v[4] = 1.5f;
  const DataCube b("D1", grid_3x2(), {Date::parse("2020-01-01")}, {"a"}, v);
  store_cube(a, tmp / "a");
  store_cube(b, tmp / "b");
  EXPECT_NE(testing_support::read_text(tmp / "a" / "values.bin"), testing_support::read_text(tmp / "b" / "values.bin"));
}

TEST(Cube, RejectsNaNAndDuplicateNames) {
  const GridSpec g = grid_3x2();
  std::vector<float> v(6, 0.0f);
  v[2] = std::nanf("");
  EXPECT_THROW(DataCube("D1", g, {Date::parse("2020-01-01")}, {"a"}, v), ValidationError);
  EXPECT_THROW(DataCube("D1", g, {Date::parse("2020-01-01")}, {"a", "a"}, std::vector<float>(12, 0.0f)),
               ValidationError);
}

TEST(Synth, SameSeedSameBytes) {
  TempDir tmp;
  SynthConfig cfg;
  write_synthetic_region(generate_synthetic_region(cfg), tmp / "a");
  write_synthetic_region(generate_synthetic_region(cfg), tmp / "b");
  for (const char* f : {"events.csv", "weather.csv", "grids.csv", "gazetteer.csv"}) {
    EXPECT_EQ(testing_support::read_text(tmp / "a" / f), testing_support::read_text(tmp / "b" / f)) << f;
  }
}

TEST(Synth, RequiresTwoYears) {
  SynthConfig cfg;
  cfg.n_years = 1;
  EXPECT_THROW(generate_synthetic_region(cfg), ValidationError);
}

TEST(Synth, ZeroRateGivesNoEvents) {
  SynthConfig cfg;
  Regime r = Regime::low_risk();
  r.ignition_rate = 0.0;
  cfg.regimes = {r};
  EXPECT_TRUE(generate_synthetic_region(cfg).events.empty());
}

TEST(Synth, RateRatioWithinThirtyPercent) {
  SynthConfig cfg;
  cfg.n_departments = 2;
  Regime hot = Regime::mediterranean();
  Regime cold = Regime::low_risk();
  hot.ignition_rate = 10.0 * cold.ignition_rate;
  cfg.regimes = {hot, cold};
  const SyntheticRegion region = generate_synthetic_region(cfg);
  double n_hot = 0, n_cold = 0;
  for (const auto& e : region.events) (e.department_id == region.departments[0].id ? n_hot : n_cold) += 1;
  ASSERT_GT(n_cold, 0.0);
  EXPECT_NEAR(n_hot / n_cold, 10.0, 3.0);
}

TEST(Synth, SomeDepartmentHasFourDistinctDailyCounts) {
  const SyntheticRegion region = generate_synthetic_region(SynthConfig{});
  bool found = false;
  for (const auto& d : region.departments) {
    const auto daily = daily_department_values(region.events, d.id, region.period, Target::FO);
    std::set<double> distinct;
    for (double v : daily) {
      if (v > 0) distinct.insert(v);
    }
    found = found || distinct.size() >= 4;
  }
  EXPECT_TRUE(found);
}

TEST(Synth, WeatherAndEventsParseBack) {
  TempDir tmp;
  const SyntheticRegion region = generate_synthetic_region(SynthConfig{});
  write_synthetic_region(region, tmp.path());
  EXPECT_EQ(read_events_csv(tmp / "events.csv"), region.events);
  EXPECT_EQ(read_weather_csv(tmp / "weather.csv").size(), region.weather.size());
  const auto grids = read_grids_csv(tmp / "grids.csv");
  EXPECT_EQ(grids.size(), region.departments.size());
}

TEST(WeatherRecord, ValidatesLatticeAndHour) {
  WeatherRecord w;
  w.grid_point = {10, 10};
  EXPECT_NO_THROW(w.validate());
  w.grid_point = {11, 0};
  EXPECT_THROW(w.validate(), ValidationError);
  w.grid_point = {0, 0};
  w.observation_hour = 14;
  EXPECT_THROW(w.validate(), ValidationError);
}

TEST(Events, NegativeBurnedAreaRejected) {
  TempDir tmp;
  testing_support::write_text(tmp / "e.csv", "date,department,location_ref,burned_area_ha\n2023-01-01,D1,A,-1\n");
  EXPECT_THROW(read_events_csv(tmp / "e.csv"), Error);
}
