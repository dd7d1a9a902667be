#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firerisk/date.hpp"
#include "firerisk/ingest.hpp"

namespace firerisk {

/// Fire occurrence (daily ignition count) or burned area (daily hectares).
enum class Target { FO, BA };

std::string_view to_string(Target t) noexcept;
Target target_from_string(std::string_view s);

inline constexpr int kNumClasses = 5;
inline constexpr int kPositiveLevels = 4;

/// Department-specific mapping of positive daily values to levels 1..k.
struct OrdinalModel {
  std::string department_id;
  Target target = Target::FO;
  /// Strictly increasing; size is the effective level count (0..4).
  std::vector<double> centroids;

  int k_effective() const noexcept { return static_cast<int>(centroids.size()); }
};

/// Globally optimal 1-D k-means (minimum within-cluster SSE) by dynamic
/// programming over the sorted values. When fewer than k distinct values
/// exist, each distinct value becomes its own cluster. Among equal-SSE
/// partitions the one with the earliest boundaries, compared from the last
/// boundary backwards, wins. Empty input yields k_effective = 0.
/// The seed is accepted for interface parity with stochastic k-means; the
/// exact solution does not depend on it.
/// Throws ValidationError on a non-positive or non-finite value.
OrdinalModel fit_ordinal_model(std::span<const double> positive_values, int k = kPositiveLevels,
                               std::uint64_t seed = 0);

/// 0 for a zero value, otherwise 1 + index of the nearest centroid (ties go
/// to the lower class). A model with no centroids labels everything 0.
/// Throws ValidationError on a negative value.
int assign_label(double value, const OrdinalModel& model);

/// Maximal run of fire days where inner gaps are at most `max_gap` idle days.
struct FireSequence {
  Date start;
  Date end;

  int length_days() const noexcept { return end - start + 1; }
  bool operator==(const FireSequence&) const = default;
};

inline constexpr int kSequenceMaxGap = 3;

/// Days `first + i` with fire_days[i] set, grouped into sequences. Two fire
/// days separated by at most `max_gap` idle days belong to one sequence.
std::vector<FireSequence> segment_sequences(std::span<const bool> fire_days, Date first,
                                            int max_gap = kSequenceMaxGap);

std::optional<double> mean_sequence_length(const std::vector<FireSequence>& sequences);

/// Round-half-up of the mean sequence length, at least 1; 1 when there are no sequences.
int kernel_half_width(const std::vector<FireSequence>& sequences);

/// Unnormalised truncated-cubic weights 1 - (d-1)^3 / h^3 for d = 1..h.
std::vector<double> cubic_kernel_weights(int half_width);

/// Causal kernel smoothing of past labels, shifted one day:
/// out[t] = sum_{d=1..h, t-d>=0} w(d) * label[t-d] / sum of the same w(d).
/// out[0] = 0. Never reads label[t] or later.
std::vector<double> past_risk_feature(std::span<const int> labels, int half_width);

/// Per-department daily class series.
struct RiskLabelSeries {
  std::string department_id;
  Target target = Target::FO;
  std::vector<Date> dates;
  std::vector<int> labels;
  std::vector<double> values;
};

/// Daily department totals over `period`: ignition counts (FO) or summed
/// burned hectares (BA). Events of other departments are ignored.
std::vector<double> daily_department_values(const std::vector<FireEvent>& events, const std::string& department_id,
                                            DateRange period, Target target);

struct DepartmentLabels {
  OrdinalModel model;
  RiskLabelSeries series;
  std::vector<FireSequence> training_sequences;
  int kernel_half_width = 1;
};

/// Fits the ordinal model on positive training-year days only, labels every
/// day of `period`, and segments training fire days into sequences.
DepartmentLabels label_department(const std::vector<FireEvent>& events, const std::string& department_id,
                                  DateRange period, Target target, const TemporalSplit& split);

/// `date,department,target,class,value`
void write_labels_csv(const std::vector<RiskLabelSeries>& series, const std::filesystem::path& path);
/// Groups rows back into one series per (department, target), sorted by date.
std::vector<RiskLabelSeries> read_labels_csv(const std::filesystem::path& path);

}  // namespace firerisk
