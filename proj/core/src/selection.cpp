#include "firerisk/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "firerisk/error.hpp"

namespace firerisk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("correlation: inputs differ in length");
}

// Number of tied pairs among runs of equal values in a sorted sequence.
template <class Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal) {
  std::int64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Sorts v ascending and returns the number of inversions (exchanges).
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const std::size_t n = x.size();
  if (n < 2) return kNaN;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const std::size_t n = x.size();
  if (n < 2) return kNaN;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  const std::int64_t n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t n1 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[order[a]] == x[order[b]]; });
  const std::int64_t n3 = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t swaps = merge_count(ys, buf, 0, n);
  const std::int64_t n2 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

  const double denom = std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
  if (denom == 0.0) return kNaN;
  const double num = static_cast<double>(n0 - n1 - n2 + n3 - 2 * swaps);
  return std::clamp(num / denom, -1.0, 1.0);
}

double variance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

SelectionResult select_features(const FeatureTable& table, const std::vector<bool>& is_training,
                                const SelectionOptions& options) {
  if (is_training.size() != table.n_rows()) throw ShapeError("select_features: mask size mismatch");
  const auto& names = table.column_names();
  const std::size_t nc = table.n_cols();

  std::vector<std::vector<double>> cols(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
      if (is_training[r]) cols[c].push_back(table.column(c)[r]);
    }
  }

  SelectionResult result;
  std::vector<bool> dropped(nc, false);
  std::vector<double> var(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    var[c] = variance(cols[c]);
    if (!(var[c] > 0.0)) {
      dropped[c] = true;
      result.dropped.push_back({names[c], "zero_variance", "", 0.0, 0.0, 0.0});
    }
  }

  std::vector<std::vector<double>> ranks(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    if (!dropped[c]) ranks[c] = average_ranks(cols[c]);
  }

  struct Pair {
    std::size_t a, b;
    double score, p, s, k;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < nc; ++a) {
    if (dropped[a]) continue;
    for (std::size_t b = a + 1; b < nc; ++b) {
      if (dropped[b]) continue;
      const double p = pearson(cols[a], cols[b]);
      const double s = pearson(ranks[a], ranks[b]);
      const double k = kendall_tau_b(cols[a], cols[b]);
      double score = 0.0;
      for (double v : {p, s, k}) {
        if (std::isfinite(v)) score = std::max(score, std::abs(v));
      }
      if (score >= options.threshold) pairs.push_back({a, b, score, p, s, k});
    }
  }
  auto key = [&](const Pair& q) {
    const std::string& x = names[q.a];
    const std::string& y = names[q.b];
    return x < y ? std::pair(x, y) : std::pair(y, x);
  };
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& l, const Pair& r) {
    if (l.score != r.score) return l.score > r.score;
    return key(l) < key(r);
  });

  for (const auto& q : pairs) {
    if (dropped[q.a] || dropped[q.b]) continue;
    std::size_t lose;
    if (var[q.a] != var[q.b]) {
      lose = var[q.a] < var[q.b] ? q.a : q.b;
    } else {
      lose = names[q.a] > names[q.b] ? q.a : q.b;
    }
    const std::size_t keep = lose == q.a ? q.b : q.a;
    dropped[lose] = true;
    result.dropped.push_back({names[lose], "correlated", names[keep], q.p, q.s, q.k});
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (!dropped[c]) result.retained.push_back(names[c]);
  }
  return result;
}

void write_selection_json(const SelectionResult& result, const SelectionOptions& options,
                          const std::filesystem::path& path) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["threshold"] = options.threshold;
  j["retained"] = result.retained;
  j["dropped"] = nlohmann::ordered_json::array();
  for (const auto& d : result.dropped) {
    nlohmann::ordered_json e;
    e["name"] = d.name;
    e["reason"] = d.reason;
    if (d.reason == "correlated") {
      e["kept"] = d.partner;
      e["pearson"] = num(d.pearson);
      e["spearman"] = num(d.spearman);
      e["kendall"] = num(d.kendall);
    }
    j["dropped"].push_back(std::move(e));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace firerisk
