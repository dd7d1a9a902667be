#include "firerisk/cube.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "firerisk/error.hpp"

namespace firerisk {

namespace {

std::string describe_gaps(const std::vector<Date>& dates) {
  std::vector<Date> missing;
  for (std::size_t i = 1; i < dates.size(); ++i) {
    for (Date d = dates[i - 1] + 1; d < dates[i] && missing.size() < 50; ++d) missing.push_back(d);
  }
  std::string s;
  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (i) s += ", ";
    s += missing[i].iso();
  }
  return s;
}

void check_dates(const std::vector<Date>& dates) {
  if (dates.empty()) throw ValidationError("cube needs at least one date");
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (dates[i] <= dates[i - 1]) {
      throw ValidationError("dates must be strictly increasing (" + dates[i - 1].iso() + " then " + dates[i].iso() +
                            ")");
    }
  }
  if (dates.back() - dates.front() + 1 != static_cast<std::int32_t>(dates.size())) {
    throw ValidationError("missing dates: " + describe_gaps(dates));
  }
}

}  // namespace

DataCube::DataCube(std::string department_id, GridSpec grid, std::vector<Date> dates,
                   std::vector<std::string> feature_names, std::vector<float> values)
    : department_id_(std::move(department_id)),
      grid_(std::move(grid)),
      dates_(std::move(dates)),
      feature_names_(std::move(feature_names)),
      values_(std::move(values)) {
  grid_.validate();
  check_dates(dates_);
  std::set<std::string_view> seen;
  for (const auto& n : feature_names_) {
    if (!seen.insert(n).second) throw ValidationError("duplicate feature name '" + n + "'");
  }
  const std::size_t expect = n_time() * n_cells() * n_features();
  if (values_.size() != expect) {
    throw ShapeError("cube payload has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(expect));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isnan(values_[i])) {
      throw ValidationError("NaN in cube " + department_id_ + " feature '" + feature_names_[i % n_features()] + "'");
    }
  }
}

std::optional<std::size_t> DataCube::find_feature(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < feature_names_.size(); ++i) {
    if (feature_names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t DataCube::feature_index(std::string_view name) const {
  if (auto i = find_feature(name)) return *i;
  throw ValidationError("cube " + department_id_ + " has no feature '" + std::string(name) + "'");
}

std::vector<double> DataCube::feature_plane(std::size_t f) const {
  const std::size_t nf = n_features();
  std::vector<double> out(n_time() * n_cells());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * nf + f];
  return out;
}

DataCube DataCube::with_features(const std::vector<std::string>& names, std::span<const float> extra) const {
  const std::size_t nf = n_features();
  const std::size_t ng = names.size();
  const std::size_t rows = n_time() * n_cells();
  if (extra.size() != rows * ng) throw ShapeError("appended feature block has the wrong size");
  std::vector<float> merged(rows * (nf + ng));
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(r * nf), nf,
                merged.begin() + static_cast<std::ptrdiff_t>(r * (nf + ng)));
    std::copy_n(extra.begin() + static_cast<std::ptrdiff_t>(r * ng), ng,
                merged.begin() + static_cast<std::ptrdiff_t>(r * (nf + ng) + nf));
  }
  auto all_names = feature_names_;
  all_names.insert(all_names.end(), names.begin(), names.end());
  return DataCube(department_id_, grid_, dates_, std::move(all_names), std::move(merged));
}

bool DataCube::operator==(const DataCube& o) const {
  return department_id_ == o.department_id_ && grid_ == o.grid_ && dates_ == o.dates_ &&
         feature_names_ == o.feature_names_ && values_.size() == o.values_.size() &&
         std::memcmp(values_.data(), o.values_.data(), values_.size() * sizeof(float)) == 0;
}

bool impute_series(std::span<double> series, int max_days, const std::vector<bool>& use_for_mean) {
  double sum = 0.0, sum_all = 0.0;
  std::size_t n = 0, n_all = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (std::isnan(series[i])) continue;
    sum_all += series[i];
    ++n_all;
    if (i < use_for_mean.size() && use_for_mean[i]) {
      sum += series[i];
      ++n;
    }
  }
  if (n_all == 0) return false;
  const double fallback = n > 0 ? sum / static_cast<double>(n) : sum_all / static_cast<double>(n_all);

  double last = std::nan("");
  int run = 0;
  for (double& v : series) {
    if (!std::isnan(v)) {
      last = v;
      run = 0;
      continue;
    }
    ++run;
    v = (!std::isnan(last) && run <= max_days) ? last : fallback;
  }
  return true;
}

DataCube build_cube(const std::string& department_id, const std::vector<FeatureLayer>& layers, const GridSpec& grid,
                    const ImputeOptions& options) {
  grid.validate();
  if (layers.empty()) throw ValidationError("build_cube: no layers");

  const FeatureLayer* ref = nullptr;
  for (const auto& l : layers) {
    if (l.n_x != grid.n_x || l.n_y != grid.n_y) {
      throw ShapeError("layer '" + l.name + "' is " + std::to_string(l.n_y) + "x" + std::to_string(l.n_x) +
                       ", grid is " + std::to_string(grid.n_y) + "x" + std::to_string(grid.n_x));
    }
    const std::size_t planes = l.is_static() ? 1 : l.dates.size();
    if (l.values.size() != planes * grid.cell_count()) {
      throw ShapeError("layer '" + l.name + "' has " + std::to_string(l.values.size()) + " values, expected " +
                       std::to_string(planes * grid.cell_count()));
    }
    if (!ref && !l.is_static()) ref = &l;
  }
  if (!ref) throw ValidationError("build_cube: every layer is static; need at least one dated layer");
  check_dates(ref->dates);
  for (const auto& l : layers) {
    if (!l.is_static() && l.dates != ref->dates) {
      throw ShapeError("layer '" + l.name + "' does not share the date range of '" + ref->name + "'");
    }
  }

  const std::vector<Date>& dates = ref->dates;
  const std::size_t nt = dates.size();
  const std::size_t nc = grid.cell_count();
  const std::size_t nf = layers.size();

  std::vector<bool> training(nt, true);
  if (options.is_training) {
    for (std::size_t t = 0; t < nt; ++t) training[t] = options.is_training(dates[t]);
  }

  std::vector<float> values(nt * nc * nf);
  std::vector<double> series(nt);
  std::vector<std::string> names;
  names.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& l = layers[f];
    names.push_back(l.name);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t t = 0; t < nt; ++t) series[t] = l.is_static() ? l.values[c] : l.values[t * nc + c];
      if (!impute_series(series, options.max_forward_fill_days, training)) {
        throw ValidationError("layer '" + l.name + "' has no finite value at cell " + std::to_string(c));
      }
      for (std::size_t t = 0; t < nt; ++t) values[(t * nc + c) * nf + f] = static_cast<float>(series[t]);
    }
  }
  return DataCube(department_id, grid, dates, std::move(names), std::move(values));
}

}  // namespace firerisk
