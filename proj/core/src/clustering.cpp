#include "firerisk/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"
#include "firerisk/parallel.hpp"
#include "firerisk/random.hpp"

namespace firerisk {

double dtw_distance(std::span<const double> a, std::span<const double> b, std::optional<std::size_t> band) {
  if (a.empty() || b.empty()) throw ValidationError("dtw_distance: series must be non-empty");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t diff = n > m ? n - m : m - n;
  if (band && *band < diff) {
    throw ValidationError("dtw_distance: band " + std::to_string(*band) + " is narrower than the length difference " +
                          std::to_string(diff));
  }
  const std::size_t w = band.value_or(std::max(n, m));
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Two rolling rows of the (n+1) x (m+1) cost table.
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    const std::size_t lo = i > w ? i - w : 1;
    const std::size_t hi = std::min(m, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double d = a[i - 1] - b[j - 1];
      cur[j] = d * d + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::vector<double> z_normalize(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  double ss = 0.0;
  for (double v : out) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(out.size()));
  for (double& v : out) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return out;
}

std::vector<double> resample_sum(std::span<const double> x, std::size_t days) {
  if (days == 0) throw ValidationError("resample_sum: block length must be >= 1");
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); i += days) {
    double s = 0.0;
    for (std::size_t j = i; j < std::min(x.size(), i + days); ++j) s += x[j];
    out.push_back(s);
  }
  return out;
}

ClusterAssignment cluster_departments(const std::vector<DepartmentSeries>& series, const ClusterOptions& opt) {
  const std::size_t n = series.size();
  if (opt.k == 0 || opt.k > n) {
    throw ValidationError("cluster_departments: k = " + std::to_string(opt.k) + " must be in 1.." + std::to_string(n));
  }
  std::vector<std::vector<double>> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (series[i].values.size() != series[0].values.size()) {
      throw ShapeError("cluster_departments: series lengths differ (" + series[i].department_id + ")");
    }
    xs[i] = opt.z_normalize ? z_normalize(series[i].values) : series[i].values;
  }

  // Upper-triangle pairs computed in parallel, mirrored afterwards.
  std::vector<double> dist(n * n, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(pairs.size(), opt.jobs, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    dist[i * n + j] = dtw_distance(xs[i], xs[j], opt.band);
  });
  for (const auto& [i, j] : pairs) dist[j * n + i] = dist[i * n + j];

  auto total_cost = [&](const std::vector<std::size_t>& medoids) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t m : medoids) best = std::min(best, dist[i * n + m]);
      cost += best;
    }
    return cost;
  };

  // Seeded partial Fisher-Yates draw of the initial medoids.
  Rng rng(opt.seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < opt.k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> medoids(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(opt.k));
  std::sort(medoids.begin(), medoids.end());

  ClusterAssignment out;
  double cost = total_cost(medoids);
  out.cost_history.push_back(cost);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    double best_cost = cost;
    std::size_t best_slot = 0, best_candidate = 0;
    bool improved = false;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      for (std::size_t cand = 0; cand < n; ++cand) {
        if (std::find(medoids.begin(), medoids.end(), cand) != medoids.end()) continue;
        auto trial = medoids;
        trial[slot] = cand;
        const double c = total_cost(trial);
        if (c < best_cost) {
          best_cost = c;
          best_slot = slot;
          best_candidate = cand;
          improved = true;
        }
      }
    }
    if (!improved) break;
    medoids[best_slot] = best_candidate;
    std::sort(medoids.begin(), medoids.end());
    cost = best_cost;
    out.cost_history.push_back(cost);
  }

  // Nearest medoid per department (ties to the lower medoid index), then
  // renumber clusters by first appearance so ids do not depend on draw order.
  std::vector<std::size_t> nearest(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = medoids[0];
    for (std::size_t m : medoids) {
      if (dist[i * n + m] < dist[i * n + best]) best = m;
    }
    // A medoid always belongs to its own cluster, even with duplicate series.
    if (std::find(medoids.begin(), medoids.end(), i) != medoids.end()) best = i;
    nearest[i] = best;
  }
  out.departments.reserve(n);
  for (const auto& s : series) out.departments.push_back(s.department_id);
  out.cluster.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find(out.medoids.begin(), out.medoids.end(), nearest[i]);
    if (it == out.medoids.end()) {
      out.medoids.push_back(nearest[i]);
      out.cluster[i] = static_cast<int>(out.medoids.size() - 1);
    } else {
      out.cluster[i] = static_cast<int>(it - out.medoids.begin());
    }
  }
  return out;
}

void write_clusters_csv(const ClusterAssignment& a, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"department", "cluster", "medoid"});
  for (std::size_t i = 0; i < a.departments.size(); ++i) {
    out.field(a.departments[i]).field(a.cluster[i]).field(a.medoid_of(i));
    out.end_row();
  }
  out.close();
}

std::vector<std::pair<std::string, int>> read_clusters_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"department", "cluster", "medoid"});
  std::vector<std::pair<std::string, int>> out;
  CsvRow row;
  while (in.next(row)) {
    const long long c = in.integer(row, 1);
    if (c < 0) in.fail(row, "cluster id must be >= 0");
    out.emplace_back(in.text(row, 0), static_cast<int>(c));
  }
  return out;
}

}  // namespace firerisk
