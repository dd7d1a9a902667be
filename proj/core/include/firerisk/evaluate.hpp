#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "firerisk/labeling.hpp"
#include "firerisk/metrics.hpp"
#include "firerisk/predictions.hpp"

namespace firerisk {

struct MetricSet {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  /// Absent for binary models.
  std::optional<double> iou;
  std::optional<double> auoc;
  std::size_t n_samples = 0;
};

struct AreaScores {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> iou;
  /// Departments with at least one fire in the scored split, by id.
  std::vector<std::string> departments;
};

struct MetricReport {
  std::string model;
  Target target = Target::FO;
  bool binary = false;
  Split split = Split::Test;
  MetricSet global;
  /// Sorted by department id.
  std::vector<std::pair<std::string, MetricSet>> per_department;
  /// Absent when no department had a fire in the split.
  std::optional<AreaScores> area;
  ConfusionMatrix confusion{kNumClasses};
};

/// Metrics of a prediction set against the truth rows of `split`. Rows
/// outside the split are ignored; coverage gaps or unknown departments throw
/// ValidationError.
MetricReport evaluate(const PredictionSet& predictions, const std::vector<RiskLabelSeries>& truth,
                      const TemporalSplit& temporal_split, Split split = Split::Test);

nlohmann::ordered_json report_to_json(const MetricReport& report);

/// JSON array of reports.
void write_report_json(const std::vector<MetricReport>& reports, const std::filesystem::path& path);
/// One row per report: model, target, global and area metrics.
void write_report_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path);
/// Per-department score curves: `model,target,department,f1,precision,recall,iou,auoc,n_samples,in_area`.
void write_per_department_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path);

}  // namespace firerisk
