#include "firerisk/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <tuple>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"

namespace firerisk {

std::string_view to_string(Target t) noexcept { return t == Target::FO ? "fo" : "ba"; }

Target target_from_string(std::string_view s) {
  if (s == "fo" || s == "FO") return Target::FO;
  if (s == "ba" || s == "BA") return Target::BA;
  throw ValidationError("unknown target '" + std::string(s) + "' (expected fo or ba)");
}

OrdinalModel fit_ordinal_model(std::span<const double> positive_values, int k, std::uint64_t /*seed*/) {
  if (k < 1) throw ValidationError("fit_ordinal_model: k must be >= 1");
  std::vector<double> v(positive_values.begin(), positive_values.end());
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("fit_ordinal_model: values must be finite and > 0");
  }
  OrdinalModel model;
  if (v.empty()) return model;
  std::sort(v.begin(), v.end());

  // Collapse to distinct values with multiplicities; sums are centred on the
  // overall mean to limit cancellation in S2 - S1^2/W.
  long double mean = 0.0L;
  for (double x : v) mean += x;
  mean /= static_cast<long double>(v.size());
  std::vector<double> uniq;
  std::vector<long double> w, s1, s2;
  for (double x : v) {
    if (uniq.empty() || uniq.back() != x) {
      uniq.push_back(x);
      w.push_back(0.0L);
      s1.push_back(0.0L);
      s2.push_back(0.0L);
    }
    const long double c = static_cast<long double>(x) - mean;
    w.back() += 1.0L;
    s1.back() += c;
    s2.back() += c * c;
  }
  const std::size_t m = uniq.size();
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), m);

  std::vector<long double> pw(m + 1, 0.0L), p1(m + 1, 0.0L), p2(m + 1, 0.0L);
  for (std::size_t i = 0; i < m; ++i) {
    pw[i + 1] = pw[i] + w[i];
    p1[i + 1] = p1[i] + s1[i];
    p2[i + 1] = p2[i] + s2[i];
  }
  // SSE of distinct values [j, i).
  auto cost = [&](std::size_t j, std::size_t i) {
    const long double ww = pw[i] - pw[j];
    const long double a = p1[i] - p1[j];
    const long double sse = (p2[i] - p2[j]) - a * a / ww;
    return sse < 0.0L ? 0.0L : sse;
  };

  constexpr long double inf = std::numeric_limits<long double>::infinity();
  // best[c][i]: minimum SSE splitting the first i distinct values into c clusters.
  std::vector<std::vector<long double>> best(kk + 1, std::vector<long double>(m + 1, inf));
  best[0][0] = 0.0L;
  for (std::size_t c = 1; c <= kk; ++c) {
    for (std::size_t i = c; i <= m; ++i) {
      for (std::size_t j = c - 1; j < i; ++j) {
        if (best[c - 1][j] == inf) continue;
        best[c][i] = std::min(best[c][i], best[c - 1][j] + cost(j, i));
      }
    }
  }

  const long double tol = 1e-9L * std::max(1.0L, cost(0, m));
  std::vector<std::size_t> starts(kk);
  std::size_t end = m;
  for (std::size_t c = kk; c >= 1; --c) {
    std::size_t pick = c - 1;
    for (std::size_t j = c - 1; j < end; ++j) {
      if (best[c - 1][j] == inf) continue;
      if (best[c - 1][j] + cost(j, end) <= best[c][end] + tol) {
        pick = j;
        break;
      }
    }
    starts[c - 1] = pick;
    end = pick;
  }

  model.centroids.resize(kk);
  for (std::size_t c = 0; c < kk; ++c) {
    const std::size_t j = starts[c];
    const std::size_t i = c + 1 < kk ? starts[c + 1] : m;
    model.centroids[c] = static_cast<double>(mean + (p1[i] - p1[j]) / (pw[i] - pw[j]));
  }
  // Rounding can tie two centroids of adjacent, nearly equal values; keep strict order.
  for (std::size_t c = 1; c < kk; ++c) {
    if (!(model.centroids[c] > model.centroids[c - 1])) {
      model.centroids[c] = std::nextafter(model.centroids[c - 1], std::numeric_limits<double>::infinity());
    }
  }
  return model;
}

int assign_label(double value, const OrdinalModel& model) {
  if (std::isnan(value) || value < 0.0) throw ValidationError("assign_label: value must be >= 0");
  if (value == 0.0 || model.centroids.empty()) return 0;
  int cls = 1;
  const auto& c = model.centroids;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double mid = c[i] + (c[i + 1] - c[i]) / 2.0;
    if (value > mid) cls = static_cast<int>(i) + 2;
  }
  return cls;
}

std::vector<FireSequence> segment_sequences(std::span<const bool> fire_days, Date first, int max_gap) {
  std::vector<FireSequence> out;
  std::optional<std::size_t> start, last;
  for (std::size_t i = 0; i < fire_days.size(); ++i) {
    if (!fire_days[i]) continue;
    if (last && static_cast<int>(i - *last - 1) <= max_gap) {
      last = i;
      continue;
    }
    if (start) {
      out.push_back({first + static_cast<std::int32_t>(*start), first + static_cast<std::int32_t>(*last)});
    }
    start = i;
    last = i;
  }
  if (start) out.push_back({first + static_cast<std::int32_t>(*start), first + static_cast<std::int32_t>(*last)});
  return out;
}

std::optional<double> mean_sequence_length(const std::vector<FireSequence>& sequences) {
  if (sequences.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& s : sequences) total += s.length_days();
  return total / static_cast<double>(sequences.size());
}

int kernel_half_width(const std::vector<FireSequence>& sequences) {
  const auto mean = mean_sequence_length(sequences);
  if (!mean) return 1;
  return std::max(1, static_cast<int>(std::floor(*mean + 0.5)));
}

std::vector<double> cubic_kernel_weights(int h) {
  if (h < 1) throw ValidationError("kernel half-width must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(h));
  const double h3 = static_cast<double>(h) * h * h;
  for (int d = 1; d <= h; ++d) {
    const double u = static_cast<double>(d - 1);
    w[static_cast<std::size_t>(d - 1)] = 1.0 - u * u * u / h3;
  }
  return w;
}

std::vector<double> past_risk_feature(std::span<const int> labels, int h) {
  const auto w = cubic_kernel_weights(h);
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t t = 1; t < labels.size(); ++t) {
    double num = 0.0, den = 0.0;
    for (int d = 1; d <= h && static_cast<std::size_t>(d) <= t; ++d) {
      const double wd = w[static_cast<std::size_t>(d - 1)];
      num += wd * labels[t - static_cast<std::size_t>(d)];
      den += wd;
    }
    out[t] = num / den;
  }
  return out;
}

std::vector<double> daily_department_values(const std::vector<FireEvent>& events, const std::string& department_id,
                                            DateRange period, Target target) {
  std::vector<double> v(static_cast<std::size_t>(std::max(period.size(), 0)), 0.0);
  for (const auto& e : events) {
    if (e.department_id != department_id || !period.contains(e.date)) continue;
    v[static_cast<std::size_t>(e.date - period.first)] += target == Target::FO ? 1.0 : e.burned_area_ha;
  }
  return v;
}

DepartmentLabels label_department(const std::vector<FireEvent>& events, const std::string& department_id,
                                  DateRange period, Target target, const TemporalSplit& split) {
  DepartmentLabels out;
  const auto values = daily_department_values(events, department_id, period, target);
  std::vector<double> positives;
  std::optional<std::size_t> first_train, last_train;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (split.assign(period.first + static_cast<std::int32_t>(i)) != Split::Train) continue;
    if (values[i] > 0.0) positives.push_back(values[i]);
    if (!first_train) first_train = i;
    last_train = i;
  }
  out.model = fit_ordinal_model(positives);
  out.model.department_id = department_id;
  out.model.target = target;

  out.series.department_id = department_id;
  out.series.target = target;
  out.series.values = values;
  out.series.dates.reserve(values.size());
  out.series.labels.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.series.dates.push_back(period.first + static_cast<std::int32_t>(i));
    out.series.labels.push_back(assign_label(values[i], out.model));
  }
  if (first_train) {
    // Non-training days between training years count as idle.
    const std::size_t n = *last_train - *first_train + 1;
    auto flags = std::make_unique<bool[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = *first_train + i;
      flags[i] = values[k] > 0.0 && split.assign(period.first + static_cast<std::int32_t>(k)) == Split::Train;
    }
    out.training_sequences = segment_sequences(std::span<const bool>(flags.get(), n),
                                               period.first + static_cast<std::int32_t>(*first_train));
  }
  out.kernel_half_width = kernel_half_width(out.training_sequences);
  return out;
}

void write_labels_csv(const std::vector<RiskLabelSeries>& series, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"date", "department", "target", "class", "value"});
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
      out.field(s.dates[i]).field(s.department_id).field(to_string(s.target)).field(s.labels[i]).field(s.values[i]);
      out.end_row();
    }
  }
  out.close();
}

std::vector<RiskLabelSeries> read_labels_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"date", "department", "target", "class", "value"});
  std::map<std::pair<std::string, std::string>, std::vector<std::tuple<Date, int, double>>> groups;
  CsvRow row;
  while (in.next(row)) {
    const Date d = in.date(row, 0);
    const std::string dept = in.text(row, 1);
    const std::string tgt = in.text(row, 2);
    try {
      (void)target_from_string(tgt);
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    const long long cls = in.integer(row, 3);
    if (cls < 0 || cls >= kNumClasses) in.fail(row, "class must be in 0..4");
    groups[{dept, tgt}].emplace_back(d, static_cast<int>(cls), in.number(row, 4));
  }
  std::vector<RiskLabelSeries> out;
  for (auto& [key, rows] : groups) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    RiskLabelSeries s;
    s.department_id = key.first;
    s.target = target_from_string(key.second);
    for (const auto& [d, c, v] : rows) {
      if (!s.dates.empty() && s.dates.back() == d) {
        throw ValidationError(path.string() + ": duplicate row for " + key.first + " " + key.second + " " + d.iso());
      }
      s.dates.push_back(d);
      s.labels.push_back(c);
      s.values.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace firerisk
