#include "firerisk/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"
#include "firerisk/log.hpp"

namespace firerisk {

double EncoderModel::encode(const std::string& category) const {
  auto it = stats.find(category);
  if (it == stats.end()) return prior;
  return (it->second.sum + smoothing * prior) / (it->second.count + smoothing);
}

double training_mean(std::span<const double> targets, const std::vector<bool>& is_training) {
  if (is_training.size() != targets.size()) throw ShapeError("training_mean: mask size mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!is_training[i]) continue;
    sum += targets[i];
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

OrderedEncoding ordered_target_encode(std::span<const Date> dates, std::span<const std::string> categories,
                                      std::span<const double> targets, const std::vector<bool>& is_training,
                                      double smoothing, double prior, std::string feature) {
  const std::size_t n = dates.size();
  if (categories.size() != n || targets.size() != n || is_training.size() != n) {
    throw ShapeError("ordered_target_encode: input lengths differ");
  }
  if (!(smoothing > 0.0)) throw ValidationError("ordered_target_encode: smoothing must be > 0");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dates[a] < dates[b]; });

  OrderedEncoding out;
  out.values.resize(n);
  out.model.feature = std::move(feature);
  out.model.smoothing = smoothing;
  out.model.prior = prior;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && dates[order[j]] == dates[order[i]]) ++j;
    for (std::size_t r = i; r < j; ++r) out.values[order[r]] = out.model.encode(categories[order[r]]);
    for (std::size_t r = i; r < j; ++r) {
      const std::size_t row = order[r];
      if (!is_training[row]) continue;
      auto& s = out.model.stats[categories[row]];
      s.sum += targets[row];
      s.count += 1.0;
    }
    i = j;
  }
  return out;
}

const std::vector<std::string>& calendar_encoder_names() {
  static const std::vector<std::string> names = {"dow", "month", "week", "holiday", "weekend"};
  return names;
}

std::string calendar_category(const std::string& encoder, Date d) {
  if (encoder == "dow") return std::to_string(d.weekday());
  if (encoder == "month") return std::to_string(d.month());
  if (encoder == "week") return std::to_string((d.day_of_year() - 1) / 7);
  if (encoder == "holiday") return is_french_public_holiday(d) ? "1" : "0";
  if (encoder == "weekend") return d.weekday() >= 5 ? "1" : "0";
  throw ValidationError("unknown calendar encoder '" + encoder + "'");
}

EncodingAggregates aggregate_encodings(std::span<const double> v) {
  if (v.empty()) throw ValidationError("aggregate_encodings: no encodings");
  EncodingAggregates a;
  a.min = a.max = v[0];
  for (double x : v) {
    a.sum += x;
    a.min = std::min(a.min, x);
    a.max = std::max(a.max, x);
  }
  a.mean = std::clamp(a.sum / static_cast<double>(v.size()), a.min, a.max);
  return a;
}

EncodedColumns calendar_features(std::span<const std::string> departments, std::span<const Date> dates,
                                 std::span<const double> targets, const std::vector<bool>& is_training,
                                 double smoothing, double prior) {
  const std::size_t n = dates.size();
  if (departments.size() != n) throw ShapeError("calendar_features: input lengths differ");
  EncodedColumns out;
  const auto& encoders = calendar_encoder_names();
  std::vector<std::string> keys(n);
  for (const auto& enc : encoders) {
    for (std::size_t i = 0; i < n; ++i) keys[i] = departments[i] + "|" + calendar_category(enc, dates[i]);
    auto e = ordered_target_encode(dates, keys, targets, is_training, smoothing, prior, "cal_" + enc);
    out.names.push_back("cal_" + enc);
    out.columns.push_back(std::move(e.values));
    out.models.push_back(std::move(e.model));
  }
  std::vector<std::vector<double>> agg(4, std::vector<double>(n));
  std::vector<double> row(encoders.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < encoders.size(); ++e) row[e] = out.columns[e][i];
    const auto a = aggregate_encodings(row);
    agg[0][i] = a.mean;
    agg[1][i] = a.sum;
    agg[2][i] = a.min;
    agg[3][i] = a.max;
  }
  for (const char* name : {"cal_mean", "cal_sum", "cal_min", "cal_max"}) out.names.emplace_back(name);
  for (auto& c : agg) out.columns.push_back(std::move(c));
  return out;
}

EncodedColumns aggregate_spatial(const DataCube& cube, const std::vector<Zone>& zones_in) {
  const std::size_t nc = cube.n_cells();
  std::vector<Zone> zones = zones_in;
  const bool named = !zones.empty();
  if (zones.empty()) zones.push_back({"all", std::vector<bool>(nc, true)});

  std::vector<std::vector<std::size_t>> members(zones.size());
  for (std::size_t z = 0; z < zones.size(); ++z) {
    if (zones[z].cells.size() != nc) {
      throw ShapeError("aggregate_spatial: zone '" + zones[z].name + "' mask has " +
                       std::to_string(zones[z].cells.size()) + " cells, cube has " + std::to_string(nc));
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (zones[z].cells[c]) members[z].push_back(c);
    }
    if (members[z].empty()) throw ValidationError("aggregate_spatial: zone '" + zones[z].name + "' is empty");
  }

  EncodedColumns out;
  const std::size_t nt = cube.n_time();
  const std::size_t nf = cube.n_features();
  const auto values = cube.values();
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t z = 0; z < zones.size(); ++z) {
      const std::string base = cube.feature_names()[f] + (named ? "_" + zones[z].name : std::string());
      std::vector<double> mn(nt), mx(nt), mean(nt);
      for (std::size_t t = 0; t < nt; ++t) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (std::size_t c : members[z]) {
          const double v = values[(t * nc + c) * nf + f];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          sum += v;
        }
        mn[t] = lo;
        mx[t] = hi;
        mean[t] = std::clamp(sum / static_cast<double>(members[z].size()), lo, hi);
      }
      out.names.push_back(base + "_min");
      out.columns.push_back(std::move(mn));
      out.names.push_back(base + "_max");
      out.columns.push_back(std::move(mx));
      out.names.push_back(base + "_mean");
      out.columns.push_back(std::move(mean));
    }
  }
  return out;
}

double training_cell_day_mean(const DailyRasters& fires, const std::vector<bool>& is_training_day) {
  const std::size_t nd = static_cast<std::size_t>(fires.period.size());
  if (is_training_day.size() != nd) throw ShapeError("training_cell_day_mean: mask size mismatch");
  double sum = 0.0;
  double n = 0.0;
  for (std::size_t d = 0; d < nd; ++d) {
    if (!is_training_day[d]) continue;
    for (std::size_t c = 0; c < fires.cells(); ++c) sum += fires.counts[d * fires.cells() + c];
    n += static_cast<double>(fires.cells());
  }
  return n == 0.0 ? 0.0 : sum / n;
}

std::vector<float> encode_categorical_raster(std::span<const double> categories, const DailyRasters& fires,
                                             const std::vector<bool>& is_training_day, double smoothing,
                                             double prior) {
  const std::size_t nc = fires.cells();
  const std::size_t nd = static_cast<std::size_t>(fires.period.size());
  if (categories.size() != nc) throw ShapeError("encode_categorical_raster: category raster size mismatch");
  if (is_training_day.size() != nd) throw ShapeError("encode_categorical_raster: mask size mismatch");
  if (!(smoothing > 0.0)) throw ValidationError("encode_categorical_raster: smoothing must be > 0");

  std::map<double, CategoryStats> stats;
  std::map<double, double> cells_per_category;
  for (double c : categories) cells_per_category[c] += 1.0;

  std::vector<float> out(nd * nc);
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t c = 0; c < nc; ++c) {
      auto it = stats.find(categories[c]);
      const double v = it == stats.end() ? prior
                                         : (it->second.sum + smoothing * prior) / (it->second.count + smoothing);
      out[d * nc + c] = static_cast<float>(v);
    }
    if (!is_training_day[d]) continue;
    for (const auto& [cat, n] : cells_per_category) stats[cat].count += n;
    for (std::size_t c = 0; c < nc; ++c) stats[categories[c]].sum += fires.counts[d * nc + c];
  }
  return out;
}

LandcoverMapping LandcoverMapping::corine_default() {
  LandcoverMapping m;
  const std::vector<std::pair<std::string, std::vector<int>>> groups = {
      {"urban", {111, 112, 121, 131, 132, 133, 141, 142}},
      {"transport", {122, 123, 124}},
      {"forest", {311, 312, 313}},
      {"natural_vegetation", {322, 323, 324, 333}},
      {"agriculture", {211, 212, 213, 221, 222, 223, 241, 242, 243, 244}},
      {"grassland", {231, 321}},
      {"natural_non_vegetated", {332, 334, 335}},
      {"littoral", {331, 421, 422, 423}},
      {"water", {511, 512, 521, 522, 523}},
      {"wetland", {411, 412}},
  };
  int id = 1;
  for (const auto& [name, codes] : groups) {
    m.group_names_[id] = name;
    for (int c : codes) m.code_to_group_[c] = id;
    ++id;
  }
  return m;
}

LandcoverMapping LandcoverMapping::read_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"code", "group", "group_name"});
  LandcoverMapping m;
  CsvRow row;
  while (in.next(row)) {
    const int code = static_cast<int>(in.integer(row, 0));
    const int group = static_cast<int>(in.integer(row, 1));
    const std::string name = in.text(row, 2);
    if (!m.code_to_group_.emplace(code, group).second) in.fail(row, "duplicate code " + std::to_string(code));
    auto [it, inserted] = m.group_names_.emplace(group, name);
    if (!inserted && it->second != name) in.fail(row, "group " + std::to_string(group) + " has two names");
  }
  return m;
}

void LandcoverMapping::write_csv(const std::filesystem::path& path) const {
  CsvWriter out(path);
  out.row({"code", "group", "group_name"});
  for (const auto& [code, group] : code_to_group_) {
    out.field(code).field(group).field(group_names_.at(group));
    out.end_row();
  }
  out.close();
}

int LandcoverMapping::group(int code) const {
  auto it = code_to_group_.find(code);
  if (it == code_to_group_.end()) throw ValidationError("land-cover code " + std::to_string(code) + " is not mapped");
  return it->second;
}

bool is_standardization_exempt(const std::string& name) {
  return name.rfind("past_risk", 0) == 0 || name.rfind("past_ba", 0) == 0;
}

void Scaler::apply(FeatureTable& table) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (passthrough[i]) continue;
    auto& col = table.column(table.column_index(names[i]));
    for (double& x : col) x = (x - mean[i]) / sd[i];
  }
}

Scaler standardize(FeatureTable& table, const std::vector<bool>& is_training) {
  if (is_training.size() != table.n_rows()) throw ShapeError("standardize: mask size mismatch");
  Scaler s;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const auto& name = table.column_names()[c];
    const auto& col = table.column(c);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (is_training[r]) {
        sum += col[r];
        ++n;
      }
    }
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (is_training[r]) ss += (col[r] - mean) * (col[r] - mean);
    }
    const double sd = n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
    bool pass = is_standardization_exempt(name);
    if (!pass && !(sd > 0.0)) {
      log::warn("standardize: column '" + name + "' has zero training variance; left unscaled");
      pass = true;
    }
    s.names.push_back(name);
    s.mean.push_back(mean);
    s.sd.push_back(sd);
    s.passthrough.push_back(pass);
  }
  s.apply(table);
  return s;
}

void write_scaler_json(const Scaler& s, const std::filesystem::path& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    j.push_back({{"column", s.names[i]}, {"mean", s.mean[i]}, {"sd", s.sd[i]}, {"passthrough", bool(s.passthrough[i])}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace firerisk
