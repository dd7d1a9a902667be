#include "firerisk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "firerisk/clustering.hpp"
#include "firerisk/csv.hpp"
#include "firerisk/cube_io.hpp"
#include "firerisk/encoding.hpp"
#include "firerisk/feature_table.hpp"
#include "firerisk/hash.hpp"
#include "firerisk/indices.hpp"
#include "firerisk/labeling.hpp"
#include "firerisk/log.hpp"
#include "firerisk/parallel.hpp"
#include "firerisk/random.hpp"
#include "firerisk/selection.hpp"
#include "firerisk/windows.hpp"

namespace firerisk {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return json::parse(in);
}

// Every regular file under `p` (or `p` itself), sorted, relative to `root`.
std::vector<fs::path> files_under(const fs::path& p) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(p)) {
    out.push_back(p);
  } else if (fs::is_directory(p)) {
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file()) out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Content hash of a file or directory tree; "missing" when absent.
std::string hash_path(const fs::path& p) {
  if (!fs::exists(p)) return "missing";
  Fnv1a64 h;
  for (const auto& f : files_under(p)) {
    h.update(fs::relative(f, fs::is_directory(p) ? p : p.parent_path()).generic_string());
    h.update(hash_file(f));
  }
  return h.hex();
}

std::vector<std::string> department_ids(const PipelineConfig& c) {
  std::vector<std::string> ids;
  for (const auto& [id, g] : read_grids_csv(c.paths.grids)) ids.push_back(id);
  return ids;
}

DateRange cube_period(const fs::path& cube_dir) {
  const json meta = read_json(cube_dir / "meta.json");
  const auto& dates = meta.at("dates");
  if (dates.empty()) throw IntegrityError(cube_dir.string() + ": cube has no dates");
  return {Date::parse(dates.front().get<std::string>()), Date::parse(dates.back().get<std::string>())};
}

std::vector<bool> training_mask(const std::vector<Date>& dates, const TemporalSplit& split) {
  std::vector<bool> m(dates.size());
  for (std::size_t i = 0; i < dates.size(); ++i) m[i] = split.assign(dates[i]) == Split::Train;
  return m;
}

LandcoverMapping landcover_mapping(const PipelineConfig& c) {
  return c.paths.landcover_mapping.empty() ? LandcoverMapping::corine_default()
                                           : LandcoverMapping::read_csv(c.paths.landcover_mapping);
}

struct Stage {
  std::string name;
  std::vector<std::string> deps;
  std::function<json()> fingerprint;
  std::function<std::vector<fs::path>()> inputs;
  std::function<std::vector<fs::path>()> outputs;
  std::function<void()> run;
};

class Runner {
 public:
  explicit Runner(const PipelineConfig& c) : c_(c), out_(c.paths.out), split_(c.split()) {}

  std::vector<Stage> stages();

 private:
  fs::path cube_dir(const std::string& d) const { return out_ / "cubes" / d; }
  fs::path index_dir(const std::string& d) const { return out_ / "indices" / d; }

  void ingest();
  void indices();
  void labeling();
  void clustering();
  void encoding();
  void selection();
  void windows();
  void baselines();
  void evaluation();

  const PipelineConfig& c_;
  fs::path out_;
  TemporalSplit split_;
};

std::vector<Stage> Runner::stages() {
  const fs::path raw_events = c_.paths.events;
  std::vector<fs::path> raw = {c_.paths.events, c_.paths.weather, c_.paths.grids, c_.paths.gazetteer};
  if (!c_.paths.static_dir.empty()) raw.push_back(c_.paths.static_dir);
  auto split_json = [this] {
    return json{{"train", c_.train_years}, {"val", c_.val_years}, {"test", c_.test_years}};
  };
  std::vector<std::string> target_names;
  for (Target t : c_.targets) target_names.emplace_back(to_string(t));
  const json cfg = c_.to_json();

  std::vector<Stage> s;
  s.push_back({"ingest", {}, [=] { return json{{"split", split_json()}}; }, [=] { return raw; },
               [this] { return std::vector<fs::path>{out_ / "cubes"}; }, [this] { ingest(); }});
  s.push_back({"indices", {"ingest"}, [=] { return cfg.at("indices"); },
               [this] { return std::vector<fs::path>{out_ / "cubes"}; },
               [this] { return std::vector<fs::path>{out_ / "indices"}; }, [this] { indices(); }});
  s.push_back({"labeling", {"ingest"}, [=] { return json{{"labeling", cfg.at("labeling")}, {"split", split_json()}}; },
               [=, this] { return std::vector<fs::path>{raw_events, out_ / "cubes"}; },
               [this] { return std::vector<fs::path>{out_ / "labels.csv", out_ / "label_models.json"}; },
               [this] { labeling(); }});
  s.push_back({"clustering", {"ingest"}, [=] { return json{{"clustering", cfg.at("clustering")}, {"split", split_json()}}; },
               [=, this] { return std::vector<fs::path>{raw_events, out_ / "cubes"}; },
               [this] { return std::vector<fs::path>{out_ / "clusters.csv"}; }, [this] { clustering(); }});
  s.push_back({"encoding", {"indices", "labeling", "clustering"},
               [=] { return json{{"encoding", cfg.at("encoding")}, {"split", split_json()}}; },
               [=, this] {
                 std::vector<fs::path> in = {raw_events, c_.paths.grids, c_.paths.gazetteer, out_ / "indices",
                                             out_ / "labels.csv", out_ / "label_models.json", out_ / "clusters.csv"};
                 if (!c_.paths.landcover_mapping.empty()) in.push_back(c_.paths.landcover_mapping);
                 return in;
               },
               [this] { return std::vector<fs::path>{out_ / "features_raw.csv"}; }, [this] { encoding(); }});
  s.push_back({"selection", {"encoding"}, [=] { return cfg.at("selection"); },
               [this] { return std::vector<fs::path>{out_ / "features_raw.csv"}; },
               [this] {
                 return std::vector<fs::path>{out_ / "selection.json", out_ / "features.csv", out_ / "scaler.json"};
               },
               [this] { selection(); }});
  s.push_back({"windows", {"selection", "labeling"}, [=] { return cfg.at("windows"); },
               [this] { return std::vector<fs::path>{out_ / "features.csv", out_ / "labels.csv"}; },
               [this] { return std::vector<fs::path>{out_ / "windows"}; }, [this] { windows(); }});
  s.push_back({"baselines", {"selection", "labeling"},
               [=, this] {
                 return json{{"sweep", cfg.at("sweep")}, {"model", cfg.at("model")}, {"report", cfg.at("report")},
                             {"seed", c_.seed}, {"targets", target_names}, {"split", split_json()}};
               },
               [this] {
                 return std::vector<fs::path>{out_ / "features.csv", out_ / "features_raw.csv", out_ / "labels.csv"};
               },
               [this] { return std::vector<fs::path>{out_ / "predictions", out_ / "sweep.json"}; },
               [this] { baselines(); }});
  s.push_back({"evaluation", {"baselines", "labeling"}, [=] { return json{{"split", split_json()}}; },
               [this] { return std::vector<fs::path>{out_ / "predictions", out_ / "labels.csv"}; },
               [this] {
                 return std::vector<fs::path>{out_ / "report.json", out_ / "report.csv", out_ / "per_department.csv"};
               },
               [this] { evaluation(); }});
  return s;
}

void Runner::ingest() {
  const auto grids = read_grids_csv(c_.paths.grids);
  const auto gazetteers = read_gazetteer_csv(c_.paths.gazetteer, grids);
  const auto events = read_events_csv(c_.paths.events);
  const auto weather = read_weather_csv(c_.paths.weather);
  if (weather.empty()) throw ValidationError(c_.paths.weather.string() + ": no weather records");

  std::set<std::string> unknown;
  for (const auto& e : events) {
    if (!grids.count(e.department_id)) unknown.insert(e.department_id);
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw ValidationError(c_.paths.events.string() + ": departments without a grid: " + list);
  }

  DateRange period{weather.front().date, weather.front().date};
  for (const auto& w : weather) {
    period.first = std::min(period.first, w.date);
    period.last = std::max(period.last, w.date);
  }

  std::vector<std::string> ids;
  for (const auto& [id, g] : grids) ids.push_back(id);
  const TemporalSplit split = split_;
  parallel_for(ids.size(), c_.jobs, [&](std::size_t i) {
    const std::string& id = ids[i];
    const GridSpec& grid = grids.at(id);
    static const Gazetteer kEmpty;
    auto gz = gazetteers.find(id);
    (void)rasterize_events(events, grid, gz == gazetteers.end() ? kEmpty : gz->second, period);

    auto layers = weather_layers(weather, grid, period);
    if (!c_.paths.static_dir.empty()) {
      const fs::path p = c_.paths.static_dir / (id + ".csv");
      if (fs::exists(p)) {
        auto st = read_static_layers_csv(p, grid);
        layers.insert(layers.end(), std::make_move_iterator(st.begin()), std::make_move_iterator(st.end()));
      }
    }
    ImputeOptions opt;
    opt.is_training = [&split](Date d) { return split.assign(d) == Split::Train; };
    const DataCube cube = build_cube(id, layers, grid, opt);
    store_cube(cube, cube_dir(id));
  });
}

void Runner::indices() {
  const auto ids = department_ids(c_);
  IndexOptions opt;
  opt.season_start = c_.season_start;
  opt.rain_threshold_mm = c_.rain_threshold_mm;
  parallel_for(ids.size(), c_.jobs, [&](std::size_t i) {
    const DataCube cube = load_cube(cube_dir(ids[i]));
    store_cube(compute_indices(cube, opt), index_dir(ids[i]));
  });
}

void Runner::labeling() {
  const auto ids = department_ids(c_);
  const auto events = read_events_csv(c_.paths.events);
  std::vector<RiskLabelSeries> series;
  json models = json::object();
  for (Target t : c_.targets) {
    for (const auto& id : ids) {
      const DateRange period = cube_period(cube_dir(id));
      DepartmentLabels dl = label_department(events, id, period, t, split_);
      if (c_.label_k != kPositiveLevels) {
        std::vector<double> pos;
        for (std::size_t i = 0; i < dl.series.values.size(); ++i) {
          if (split_.assign(dl.series.dates[i]) == Split::Train && dl.series.values[i] > 0.0) {
            pos.push_back(dl.series.values[i]);
          }
        }
        dl.model.centroids = fit_ordinal_model(pos, c_.label_k).centroids;
        for (std::size_t i = 0; i < dl.series.values.size(); ++i) {
          dl.series.labels[i] = assign_label(dl.series.values[i], dl.model);
        }
      }
      const auto mean_len = mean_sequence_length(dl.training_sequences);
      models[id][std::string(to_string(t))] = {
          {"centroids", dl.model.centroids},
          {"k_effective", dl.model.k_effective()},
          {"sequences", dl.training_sequences.size()},
          {"mean_sequence_length", mean_len ? json(*mean_len) : json(nullptr)},
          {"kernel_half_width", dl.kernel_half_width}};
      series.push_back(std::move(dl.series));
    }
  }
  write_labels_csv(series, out_ / "labels.csv");
  write_json(out_ / "label_models.json", models);
}

void Runner::clustering() {
  const auto ids = department_ids(c_);
  const auto events = read_events_csv(c_.paths.events);
  std::vector<DepartmentSeries> series;
  for (const auto& id : ids) {
    const DateRange period = cube_period(cube_dir(id));
    const auto daily = daily_department_values(events, id, period, Target::FO);
    std::vector<double> train;
    for (std::size_t i = 0; i < daily.size(); ++i) {
      if (split_.assign(period.first + static_cast<std::int32_t>(i)) == Split::Train) train.push_back(daily[i]);
    }
    series.push_back({id, resample_sum(train, c_.cluster_resample_days)});
  }
  ClusterOptions opt;
  opt.k = c_.cluster_k;
  if (opt.k > series.size()) {
    log::warn("clustering: k = " + std::to_string(opt.k) + " exceeds " + std::to_string(series.size()) +
              " departments; using k = " + std::to_string(series.size()));
    opt.k = series.size();
  }
  opt.seed = c_.cluster_seed;
  opt.max_iter = c_.cluster_max_iter;
  opt.band = c_.cluster_band;
  opt.jobs = c_.jobs;
  write_clusters_csv(cluster_departments(series, opt), out_ / "clusters.csv");
}

void Runner::encoding() {
  const auto grids = read_grids_csv(c_.paths.grids);
  const auto gazetteers = read_gazetteer_csv(c_.paths.gazetteer, grids);
  const auto events = read_events_csv(c_.paths.events);
  const auto labels = read_labels_csv(out_ / "labels.csv");
  const json label_models = read_json(out_ / "label_models.json");
  const auto mapping = landcover_mapping(c_);
  std::map<std::string, int> cluster_of;
  for (const auto& [d, k] : read_clusters_csv(out_ / "clusters.csv")) cluster_of[d] = k;

  std::vector<std::string> ids;
  for (const auto& [id, g] : grids) ids.push_back(id);

  struct DeptBlock {
    std::vector<Date> dates;
    EncodedColumns cols;
  };
  std::vector<DeptBlock> blocks(ids.size());
  parallel_for(ids.size(), c_.jobs, [&](std::size_t i) {
    const std::string& id = ids[i];
    DataCube cube = load_cube(index_dir(id));
    const auto lc = cube.find_feature("landcover");
    if (lc) {
      const std::size_t nc = cube.n_cells();
      std::vector<double> groups(nc);
      for (std::size_t c = 0; c < nc; ++c) {
        groups[c] = mapping.group(static_cast<int>(std::lround(cube.values()[c * cube.n_features() + *lc])));
      }
      static const Gazetteer kEmpty;
      auto gz = gazetteers.find(id);
      const DateRange period{cube.dates().front(), cube.dates().back()};
      const DailyRasters fires =
          rasterize_events(events, cube.grid(), gz == gazetteers.end() ? kEmpty : gz->second, period);
      const auto is_train = training_mask(cube.dates(), split_);
      const double prior = training_cell_day_mean(fires, is_train);
      const auto enc = encode_categorical_raster(groups, fires, is_train, c_.encoding_smoothing, prior);
      cube = cube.with_features({"landcover_fire_enc"}, enc);
    }
    blocks[i].dates = cube.dates();
    blocks[i].cols = aggregate_spatial(cube);
  });

  FeatureTable table;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<Split> splits;
    for (Date d : blocks[i].dates) splits.push_back(split_.assign(d));
    table.add_rows(ids[i], blocks[i].dates, splits);
  }
  // Raw land-cover codes are categorical; only their fire encoding is aggregated.
  const std::set<std::string> skip = {"landcover_min", "landcover_max", "landcover_mean"};
  const auto& names = blocks.front().cols.names;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (skip.count(names[c])) continue;
    std::vector<double> col;
    col.reserve(table.n_rows());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (blocks[i].cols.names[c] != names[c]) {
        throw ValidationError("department " + ids[i] + " has a different feature layout");
      }
      col.insert(col.end(), blocks[i].cols.columns[c].begin(), blocks[i].cols.columns[c].end());
    }
    table.add_column(names[c], std::move(col));
  }

  // Encoding target: departmental daily fire count.
  std::vector<double> y(table.n_rows());
  {
    std::size_t r = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const DateRange period{blocks[i].dates.front(), blocks[i].dates.back()};
      const auto daily = daily_department_values(events, ids[i], period, Target::FO);
      for (double v : daily) y[r++] = v;
    }
  }
  const auto is_train = training_mask(table.dates(), split_);
  const double prior = training_mean(y, is_train);
  const double a = c_.encoding_smoothing;

  auto cal = calendar_features(table.departments(), table.dates(), y, is_train, a, prior);
  for (std::size_t c = 0; c < cal.names.size(); ++c) table.add_column(cal.names[c], std::move(cal.columns[c]));
  table.add_column("enc_department",
                   ordered_target_encode(table.dates(), table.departments(), y, is_train, a, prior).values);
  std::vector<std::string> clusters(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    auto it = cluster_of.find(table.departments()[r]);
    if (it == cluster_of.end()) throw ValidationError("clusters.csv has no entry for " + table.departments()[r]);
    clusters[r] = std::to_string(it->second);
  }
  table.add_column("enc_cluster", ordered_target_encode(table.dates(), clusters, y, is_train, a, prior).values);

  for (Target t : c_.targets) {
    std::vector<double> col(table.n_rows(), 0.0);
    for (const auto& s : labels) {
      if (s.target != t) continue;
      const int h = label_models.at(s.department_id).at(std::string(to_string(t))).at("kernel_half_width").get<int>();
      const auto pr = past_risk_feature(s.labels, h);
      for (std::size_t i = 0; i < s.dates.size(); ++i) {
        if (auto r = table.find_row(s.department_id, s.dates[i])) col[*r] = pr[i];
      }
    }
    table.add_column("past_risk_" + std::string(to_string(t)), std::move(col));
  }
  write_feature_table_csv(table, out_ / "features_raw.csv");
}

void Runner::selection() {
  FeatureTable table = read_feature_table_csv(out_ / "features_raw.csv");
  std::vector<bool> is_train(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) is_train[r] = table.splits()[r] == Split::Train;
  SelectionOptions opt;
  opt.threshold = c_.selection_threshold;
  const auto result = select_features(table, is_train, opt);
  write_selection_json(result, opt, out_ / "selection.json");
  FeatureTable kept = table.select_columns(result.retained);
  const Scaler scaler = standardize(kept, is_train);
  write_scaler_json(scaler, out_ / "scaler.json");
  write_feature_table_csv(kept, out_ / "features.csv");
  log::info("selection: kept " + std::to_string(result.retained.size()) + " of " + std::to_string(table.n_cols()) +
            " columns");
}

void Runner::windows() {
  fs::create_directories(out_ / "windows");
  if (!c_.export_windows) return;
  const FeatureTable table = read_feature_table_csv(out_ / "features.csv");
  const auto labels = read_labels_csv(out_ / "labels.csv");
  for (Target t : c_.targets) {
    const auto wx = build_windows(table, labels, t, c_.window_days);
    write_windows(wx, out_ / "windows" / ("windows_" + std::string(to_string(t)) + ".bin"));
    log::info("windows " + std::string(to_string(t)) + ": " + std::to_string(wx.windows.size()) + " exported, " +
              std::to_string(wx.skipped) + " rows skipped for short history");
  }
}

void Runner::baselines() {
  const FeatureTable table = read_feature_table_csv(out_ / "features.csv");
  const FeatureTable raw = read_feature_table_csv(out_ / "features_raw.csv");
  const auto labels = read_labels_csv(out_ / "labels.csv");
  fs::create_directories(out_ / "predictions");

  Dataset all;
  all.n_rows = table.n_rows();
  all.n_cols = table.n_cols();
  all.x.resize(all.n_rows * all.n_cols);
  for (std::size_t c = 0; c < all.n_cols; ++c) {
    const auto& col = table.column(c);
    for (std::size_t r = 0; r < all.n_rows; ++r) all.x[r * all.n_cols + c] = col[r];
  }

  std::vector<std::size_t> fit_rows, val_rows, test_rows;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    switch (table.splits()[r]) {
      case Split::Train: fit_rows.push_back(r); break;
      case Split::Val: val_rows.push_back(r); break;
      case Split::Test: test_rows.push_back(r); break;
      case Split::Excluded: break;
    }
  }
  if (test_rows.empty()) throw ValidationError("no rows in the test split");
  if (val_rows.empty()) {
    // Chronological holdout: the latest training days validate the sweep.
    std::vector<Date> days;
    for (std::size_t r : fit_rows) days.push_back(table.dates()[r]);
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    const auto n_val = static_cast<std::size_t>(std::ceil(c_.holdout_fraction * static_cast<double>(days.size())));
    if (n_val == 0 || n_val >= days.size()) throw ValidationError("too few training days for a validation holdout");
    const Date cutoff = days[days.size() - n_val];
    std::vector<std::size_t> keep;
    for (std::size_t r : fit_rows) (table.dates()[r] >= cutoff ? val_rows : keep).push_back(r);
    fit_rows = std::move(keep);
    log::info("baselines: no validation years; holding out training days from " + cutoff.iso());
  }

  const auto fwi_col = raw.find_column("fwi_mean");
  json sweep_log = json::object();
  for (Target t : c_.targets) {
    const std::string tn(to_string(t));
    std::map<std::pair<std::string, Date>, int> truth;
    for (const auto& s : labels) {
      if (s.target != t) continue;
      for (std::size_t i = 0; i < s.dates.size(); ++i) truth[{s.department_id, s.dates[i]}] = s.labels[i];
    }
    all.y.resize(all.n_rows);
    for (std::size_t r = 0; r < all.n_rows; ++r) {
      auto it = truth.find({table.departments()[r], table.dates()[r]});
      if (it == truth.end()) {
        throw ValidationError("labels.csv has no " + tn + " label for " + table.departments()[r] + " " +
                              table.dates()[r].iso());
      }
      all.y[r] = it->second;
    }
    const Dataset fit = all.subset(fit_rows);
    const Dataset val = all.subset(val_rows);
    const Dataset test = all.subset(test_rows);

    auto make_set = [&](const std::string& model, bool binary, const std::vector<double>& scores) {
      PredictionSet ps{model, t, binary, {}};
      const std::size_t k = binary ? 2 : kNumClasses;
      for (std::size_t i = 0; i < test_rows.size(); ++i) {
        const std::size_t r = test_rows[i];
        ps.rows.push_back({table.departments()[r], table.dates()[r],
                           std::vector<double>(scores.begin() + static_cast<std::ptrdiff_t>(i * k),
                                               scores.begin() + static_cast<std::ptrdiff_t>((i + 1) * k))});
      }
      write_predictions_csv({ps}, out_ / "predictions" / (model + "_" + tn + ".csv"));
    };
    auto sweep_json = [](const SweepResult& s) {
      json pts = json::array();
      for (const auto& p : s.points) pts.push_back({{"percent", p.percent}, {"val_iou", p.val_iou}, {"n_train", p.n_train}});
      return json{{"best_percent", s.best_percent}, {"points", pts}};
    };

    const std::uint64_t tseed = derive_seed(c_.seed, t == Target::FO ? 1 : 2);
    LogisticOptions multi = c_.logistic;
    multi.n_classes = kNumClasses;
    const SweepResult ms = sweep_undersample(fit, val, logistic_learner(multi), tseed, c_.jobs, c_.sweep_grid);
    make_set("logistic", false, ms.model->scores(test));

    Dataset fit_b = fit, val_b = val;
    for (auto* d : {&fit_b, &val_b}) {
      for (int& v : d->y) v = v > 0 ? 1 : 0;
    }
    LogisticOptions bin = c_.logistic;
    bin.n_classes = 2;
    const SweepResult bs =
        sweep_undersample(fit_b, val_b, logistic_learner(bin), derive_seed(tseed, 2), c_.jobs, c_.sweep_grid);
    make_set("logistic_binary", true, bs.model->scores(test));
    sweep_log[tn] = {{"logistic", sweep_json(ms)}, {"logistic_binary", sweep_json(bs)}};

    if (fwi_col) {
      std::vector<int> cls;
      for (std::size_t r : test_rows) cls.push_back(fwi_classifier(raw.column(*fwi_col)[r], c_.fwi_thresholds));
      make_set("fwi", false, one_hot_scores(cls, kNumClasses));
    } else {
      log::warn("baselines: no fwi_mean column; FWI baseline skipped");
    }
    const auto rnd = uniform_random_classes(test_rows.size(), kNumClasses, derive_seed(tseed, 3));
    make_set("random", false, one_hot_scores(rnd, kNumClasses));
  }
  write_json(out_ / "sweep.json", sweep_log);
}

void Runner::evaluation() {
  const auto labels = read_labels_csv(out_ / "labels.csv");
  std::vector<MetricReport> reports;
  for (const auto& f : files_under(out_ / "predictions")) {
    if (f.extension() != ".csv") continue;
    for (const auto& set : ingest_predictions(f)) reports.push_back(evaluate(set, labels, split_, Split::Test));
  }
  write_report_json(reports, out_ / "report.json");
  write_report_csv(reports, out_ / "report.csv");
  write_per_department_csv(reports, out_ / "per_department.csv");
}

}  // namespace

const std::vector<std::string>& pipeline_stage_names() {
  static const std::vector<std::string> names = {"ingest",    "indices", "labeling",  "clustering", "encoding",
                                                 "selection", "windows", "baselines", "evaluation"};
  return names;
}

std::vector<StageReport> run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
  config.validate();
  if (!options.stop_after.empty()) {
    const auto& n = pipeline_stage_names();
    if (std::find(n.begin(), n.end(), options.stop_after) == n.end()) {
      throw ValidationError("unknown stage '" + options.stop_after + "'");
    }
  }
  const fs::path out = config.paths.out;
  fs::create_directories(out / ".cache");
  Runner runner(config);
  std::set<std::string> ran;
  std::vector<StageReport> reports;

  for (const Stage& st : runner.stages()) {
    const auto t0 = std::chrono::steady_clock::now();
    StageReport rep{st.name, false, 0.0};
    try {
      Fnv1a64 key;
      key.update(st.name);
      key.update(st.fingerprint().dump());
      for (const auto& in : st.inputs()) {
        key.update(in.filename().string());
        key.update(hash_path(in));
      }
      const fs::path record_path = out / ".cache" / (st.name + ".json");
      bool fresh = !options.force && fs::exists(record_path);
      for (const auto& d : st.deps) fresh = fresh && !ran.count(d);
      if (fresh) {
        const json record = read_json(record_path);
        fresh = record.value("key", "") == key.hex();
        for (const auto& o : st.outputs()) {
          const std::string rel = fs::relative(o, out).generic_string();
          fresh = fresh && record.contains("outputs") && record["outputs"].value(rel, "") == hash_path(o);
        }
      }
      if (fresh) {
        log::info("stage " + st.name + ": cache hit");
      } else {
        for (const auto& o : st.outputs()) fs::remove_all(o);
        st.run();
        json record;
        record["key"] = key.hex();
        for (const auto& o : st.outputs()) record["outputs"][fs::relative(o, out).generic_string()] = hash_path(o);
        write_json(record_path, record);
        ran.insert(st.name);
        rep.ran = true;
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(st.name, e.what());
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rep.ran) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", rep.seconds);
      log::info("stage " + st.name + ": ran in " + buf + " s");
    }
    reports.push_back(rep);
    if (st.name == options.stop_after) break;
  }
  return reports;
}

std::vector<MetricReport> evaluate_external(const std::vector<fs::path>& prediction_files, const fs::path& labels_csv,
                                            const TemporalSplit& temporal_split, const fs::path& out_dir,
                                            Split split) {
  if (prediction_files.empty()) throw ValidationError("no prediction files given");
  const auto labels = read_labels_csv(labels_csv);
  std::map<std::pair<std::string, Target>, fs::path> origin;
  std::vector<PredictionSet> sets;
  for (const auto& f : prediction_files) {
    for (auto& s : ingest_predictions(f)) {
      auto [it, inserted] = origin.emplace(std::pair(s.model, s.target), f);
      if (!inserted) {
        throw ValidationError("model '" + s.model + "' (" + std::string(to_string(s.target)) + ") appears in both " +
                              it->second.string() + " and " + f.string());
      }
      sets.push_back(std::move(s));
    }
  }
  std::vector<MetricReport> reports;
  for (const auto& s : sets) reports.push_back(evaluate(s, labels, temporal_split, split));
  fs::create_directories(out_dir);
  write_report_json(reports, out_dir / "report.json");
  write_report_csv(reports, out_dir / "report.csv");
  write_per_department_csv(reports, out_dir / "per_department.csv");
  return reports;
}

}  // namespace firerisk
