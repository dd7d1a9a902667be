#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace firerisk {

/// Dynamic time warping with squared local cost and match/insert/delete
/// steps. `band` is the Sakoe-Chiba half-width (|i - j| <= band); nullopt
/// means unconstrained. Throws ValidationError on empty input or a band
/// narrower than the length difference.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::optional<std::size_t> band = std::nullopt);

/// (x - mean) / sd with population sd; constant series map to all zeros.
std::vector<double> z_normalize(std::span<const double> x);

/// Sums consecutive blocks of `days` values; a trailing partial block is summed as is.
std::vector<double> resample_sum(std::span<const double> x, std::size_t days);

struct DepartmentSeries {
  std::string department_id;
  std::vector<double> values;
};

struct ClusterOptions {
  std::size_t k = 5;
  std::uint64_t seed = 7;
  int max_iter = 100;
  bool z_normalize = true;
  std::optional<std::size_t> band;
  int jobs = 1;
};

struct ClusterAssignment {
  std::vector<std::string> departments;
  /// Cluster id per department, 0..k-1, numbered by first appearance in department order.
  std::vector<int> cluster;
  /// Medoid department index per cluster id.
  std::vector<std::size_t> medoids;
  /// Total within-cluster DTW cost after initialisation and after every swap.
  std::vector<double> cost_history;

  const std::string& medoid_of(std::size_t department) const {
    return departments[medoids[static_cast<std::size_t>(cluster[department])]];
  }
};

/// k-medoids (PAM swap) over pairwise DTW distances. Initial medoids are a
/// seeded random draw; each iteration applies the single best improving swap
/// until none improves or max_iter is reached. Throws ValidationError when k
/// is 0 or exceeds the number of departments.
ClusterAssignment cluster_departments(const std::vector<DepartmentSeries>& series, const ClusterOptions& options);

/// `department,cluster,medoid`
void write_clusters_csv(const ClusterAssignment& assignment, const std::filesystem::path& path);
/// Returns department -> cluster id.
std::vector<std::pair<std::string, int>> read_clusters_csv(const std::filesystem::path& path);

}  // namespace firerisk
