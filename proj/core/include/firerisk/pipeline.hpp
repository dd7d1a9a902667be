#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firerisk/config.hpp"
#include "firerisk/error.hpp"
#include "firerisk/evaluate.hpp"

namespace firerisk {

/// A stage failure; what() starts with the stage name.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageReport {
  std::string name;
  bool ran = false;
  double seconds = 0.0;
};

struct PipelineOptions {
  /// Last stage to execute; empty runs everything.
  std::string stop_after;
  /// Ignore the cache and run every selected stage.
  bool force = false;
};

/// ingest, indices, labeling, clustering, encoding, selection, windows, baselines, evaluation.
const std::vector<std::string>& pipeline_stage_names();

/// Runs the stages in order under config.paths.out. A stage is skipped when
/// its cache record (out/.cache/<stage>.json) matches the hash of its config
/// slice and inputs, its outputs are unchanged on disk, and no stage it
/// depends on ran in this invocation. Logs one line per stage with wall time.
std::vector<StageReport> run_pipeline(const PipelineConfig& config, const PipelineOptions& options = {});

/// Scores prediction files against a labels.csv and writes report.json,
/// report.csv and per_department.csv into `out_dir`. Throws ValidationError
/// when two inputs carry the same (model, target).
std::vector<MetricReport> evaluate_external(const std::vector<std::filesystem::path>& prediction_files,
                                            const std::filesystem::path& labels_csv,
                                            const TemporalSplit& temporal_split, const std::filesystem::path& out_dir,
                                            Split split = Split::Test);

}  // namespace firerisk
