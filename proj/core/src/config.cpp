#include "firerisk/config.hpp"

#include <fstream>

#include "firerisk/error.hpp"

namespace firerisk {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const nlohmann::json& j, const char* key, const fs::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  fs::path p = j.at(key).get<std::string>();
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return (base / p).lexically_normal();
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const fs::path& base) {
  PipelineConfig c;
  try {
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      c.paths.events = resolve(p, "events", base);
      c.paths.weather = resolve(p, "weather", base);
      c.paths.grids = resolve(p, "grids", base);
      c.paths.gazetteer = resolve(p, "gazetteer", base);
      c.paths.static_dir = resolve(p, "static_dir", base);
      c.paths.landcover_mapping = resolve(p, "landcover_mapping", base);
      c.paths.out = resolve(p, "out", base);
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      read_opt(s, "train", c.train_years);
      read_opt(s, "val", c.val_years);
      read_opt(s, "test", c.test_years);
    }
    if (j.contains("labeling")) {
      const auto& l = j.at("labeling");
      read_opt(l, "k", c.label_k);
      if (l.contains("targets")) {
        c.targets.clear();
        for (const auto& t : l.at("targets")) c.targets.push_back(target_from_string(t.get<std::string>()));
      }
    }
    if (j.contains("indices")) {
      const auto& i = j.at("indices");
      if (i.contains("season_start")) c.season_start = MonthDay::parse(i.at("season_start").get<std::string>());
      read_opt(i, "rain_threshold_mm", c.rain_threshold_mm);
    }
    if (j.contains("clustering")) {
      const auto& k = j.at("clustering");
      read_opt(k, "k", c.cluster_k);
      read_opt(k, "seed", c.cluster_seed);
      read_opt(k, "max_iter", c.cluster_max_iter);
      read_opt(k, "resample_days", c.cluster_resample_days);
      if (k.contains("band") && !k.at("band").is_null()) c.cluster_band = k.at("band").get<std::size_t>();
    }
    if (j.contains("encoding")) read_opt(j.at("encoding"), "smoothing", c.encoding_smoothing);
    if (j.contains("selection")) read_opt(j.at("selection"), "threshold", c.selection_threshold);
    if (j.contains("sweep")) {
      read_opt(j.at("sweep"), "percents", c.sweep_grid);
      read_opt(j.at("sweep"), "holdout_fraction", c.holdout_fraction);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      read_opt(m, "l2", c.logistic.l2);
      read_opt(m, "learning_rate", c.logistic.learning_rate);
      read_opt(m, "epochs", c.logistic.epochs);
      read_opt(m, "tolerance", c.logistic.tolerance);
    }
    if (j.contains("report") && j.at("report").contains("fwi_thresholds")) {
      const auto t = j.at("report").at("fwi_thresholds").get<std::vector<double>>();
      if (t.size() != 4) throw ValidationError("report.fwi_thresholds needs exactly 4 values");
      std::copy(t.begin(), t.end(), c.fwi_thresholds.cuts.begin());
    }
    if (j.contains("windows")) {
      read_opt(j.at("windows"), "days", c.window_days);
      read_opt(j.at("windows"), "export", c.export_windows);
    }
    read_opt(j, "seed", c.seed);
    read_opt(j, "jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  auto str = [](const fs::path& p) { return p.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(p.string()); };
  j["paths"] = {{"events", str(paths.events)},
                {"weather", str(paths.weather)},
                {"grids", str(paths.grids)},
                {"gazetteer", str(paths.gazetteer)},
                {"static_dir", str(paths.static_dir)},
                {"landcover_mapping", str(paths.landcover_mapping)},
                {"out", str(paths.out)}};
  j["split"] = {{"train", train_years}, {"val", val_years}, {"test", test_years}};
  std::vector<std::string> t;
  for (auto x : targets) t.emplace_back(to_string(x));
  j["labeling"] = {{"k", label_k}, {"targets", t}};
  char md[8];
  std::snprintf(md, sizeof md, "%02u-%02u", season_start.month, season_start.day);
  j["indices"] = {{"season_start", md}, {"rain_threshold_mm", rain_threshold_mm}};
  j["clustering"] = {{"k", cluster_k},
                     {"seed", cluster_seed},
                     {"max_iter", cluster_max_iter},
                     {"resample_days", cluster_resample_days},
                     {"band", cluster_band ? nlohmann::ordered_json(*cluster_band) : nlohmann::ordered_json(nullptr)}};
  j["encoding"] = {{"smoothing", encoding_smoothing}};
  j["selection"] = {{"threshold", selection_threshold}};
  j["sweep"] = {{"percents", sweep_grid}, {"holdout_fraction", holdout_fraction}};
  j["model"] = {{"l2", logistic.l2},
                {"learning_rate", logistic.learning_rate},
                {"epochs", logistic.epochs},
                {"tolerance", logistic.tolerance}};
  j["report"] = {{"fwi_thresholds", fwi_thresholds.cuts}};
  j["windows"] = {{"days", window_days}, {"export", export_windows}};
  j["seed"] = seed;
  j["jobs"] = jobs;
  return j;
}

void PipelineConfig::save(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

void PipelineConfig::validate() const {
  auto need = [](const fs::path& p, const char* what) {
    if (p.empty()) throw ValidationError(std::string("config: paths.") + what + " is required");
    if (!fs::exists(p)) throw ValidationError(std::string("config: paths.") + what + " does not exist: " + p.string());
  };
  need(paths.events, "events");
  need(paths.weather, "weather");
  need(paths.grids, "grids");
  need(paths.gazetteer, "gazetteer");
  if (!paths.static_dir.empty()) need(paths.static_dir, "static_dir");
  if (!paths.landcover_mapping.empty()) need(paths.landcover_mapping, "landcover_mapping");
  if (paths.out.empty()) throw ValidationError("config: paths.out is required (or set FIRERISK_OUT)");
  (void)split();
  if (train_years.empty()) throw ValidationError("config: split.train is empty");
  if (test_years.empty()) throw ValidationError("config: split.test is empty");
  if (label_k < 1 || label_k > kPositiveLevels) throw ValidationError("config: labeling.k must be in 1..4");
  if (targets.empty()) throw ValidationError("config: labeling.targets is empty");
  if (cluster_k < 1) throw ValidationError("config: clustering.k must be >= 1");
  if (cluster_resample_days < 1) throw ValidationError("config: clustering.resample_days must be >= 1");
  if (!(encoding_smoothing > 0.0)) throw ValidationError("config: encoding.smoothing must be > 0");
  if (!(selection_threshold > 0.0 && selection_threshold <= 1.0)) {
    throw ValidationError("config: selection.threshold must be in (0, 1]");
  }
  if (sweep_grid.empty()) throw ValidationError("config: sweep.percents is empty");
  for (int p : sweep_grid) UndersamplePolicy{p, 0}.validate();
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("config: sweep.holdout_fraction must be in (0, 1)");
  }
  if (logistic.epochs < 1 || !(logistic.learning_rate > 0.0) || logistic.l2 < 0.0) {
    throw ValidationError("config: model needs epochs >= 1, learning_rate > 0, l2 >= 0");
  }
  fwi_thresholds.validate();
  if (window_days < 1) throw ValidationError("config: windows.days must be >= 1");
  if (jobs < 1) throw ValidationError("config: jobs must be >= 1");
}

PipelineConfig synthetic_pipeline_config(const fs::path& data_dir, int start_year, int n_years, const fs::path& out_dir) {
  PipelineConfig c;
  const fs::path d = fs::absolute(data_dir);
  c.paths.events = d / "events.csv";
  c.paths.weather = d / "weather.csv";
  c.paths.grids = d / "grids.csv";
  c.paths.gazetteer = d / "gazetteer.csv";
  c.paths.static_dir = d / "static";
  c.paths.out = out_dir.empty() ? fs::path() : fs::absolute(out_dir);
  for (int y = start_year; y < start_year + n_years - 1; ++y) c.train_years.insert(y);
  c.test_years.insert(start_year + n_years - 1);
  c.cluster_k = 2;
  return c;
}

}  // namespace firerisk
