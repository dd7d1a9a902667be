#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "firerisk/feature_table.hpp"

namespace firerisk {

/// NaN when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson on average ranks.
double spearman(std::span<const double> x, std::span<const double> y);
/// Kendall tau-b in O(n log n) (Knight's merge-sort count). NaN when either input is constant.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Population variance.
double variance(std::span<const double> x);

struct DroppedFeature {
  std::string name;
  /// "zero_variance" or "correlated".
  std::string reason;
  /// Higher-variance partner that was kept when reason is "correlated".
  std::string partner;
  double pearson = 0.0;
  double spearman = 0.0;
  double kendall = 0.0;
};

struct SelectionResult {
  std::vector<std::string> retained;
  std::vector<DroppedFeature> dropped;
};

struct SelectionOptions {
  double threshold = 0.95;
};

/// Drops zero-variance columns, then walks column pairs by descending
/// max(|pearson|, |spearman|, |kendall|) (ties by name) and, for each pair at
/// or above the threshold whose members are both still kept, drops the
/// lower-variance member; on a variance tie the lexicographically larger name
/// goes. Only rows flagged in `is_training` are used. Retained columns keep
/// table order.
SelectionResult select_features(const FeatureTable& table, const std::vector<bool>& is_training,
                                const SelectionOptions& options = {});

void write_selection_json(const SelectionResult& result, const SelectionOptions& options,
                          const std::filesystem::path& path);

}  // namespace firerisk
