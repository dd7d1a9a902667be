#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firerisk/date.hpp"
#include "firerisk/ingest.hpp"
#include "firerisk/labeling.hpp"

namespace firerisk {

struct PredictionRow {
  std::string department_id;
  Date date;
  /// Five class scores, or {1 - p, p} for binary models.
  std::vector<double> scores;
};

/// Scores of one model for one target.
struct PredictionSet {
  std::string model;
  Target target = Target::FO;
  bool binary = false;
  std::vector<PredictionRow> rows;

  int n_classes() const noexcept { return binary ? 2 : kNumClasses; }
  /// Argmax with ties to the lower class; binary rows predict 1 when p > 0.5.
  int predicted_class(const PredictionRow& row) const;
};

inline constexpr double kScoreSumTolerance = 1e-6;

/// Reads `model,target,department,date,s0,s1,s2,s3,s4` or
/// `model,target,department,date,p`. Rows are grouped into one set per
/// (model, target) in first-appearance order. Throws ParseError naming the
/// line for malformed fields, negative scores, score rows not summing to 1
/// within 1e-6, probabilities outside [0, 1] and duplicate (model, target,
/// department, date) keys.
std::vector<PredictionSet> ingest_predictions(const std::filesystem::path& path);

void write_predictions_csv(const std::vector<PredictionSet>& sets, const std::filesystem::path& path);

/// Requires exactly the (department, date) pairs of `truth` rows in `split`
/// for the set's target. Throws ValidationError listing unknown departments
/// or, failing that, the missing pairs.
void check_coverage(const PredictionSet& set, const std::vector<RiskLabelSeries>& truth,
                    const TemporalSplit& temporal_split, Split split);

}  // namespace firerisk
