#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "firerisk/logistic.hpp"

namespace firerisk {

/// Share of class-0 training rows kept, on the 5% grid.
struct UndersamplePolicy {
  int percent = 100;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless percent is a multiple of 5 in [5, 100].
  void validate() const;
  double proportion() const noexcept { return percent / 100.0; }
};

/// 5, 10, ..., 100.
std::vector<int> undersample_grid();

/// Indices (ascending) of the rows kept: every row with label > 0 and a
/// uniformly random ceil(p * n0) of the class-0 rows.
std::vector<std::size_t> undersample(std::span<const int> labels, const UndersamplePolicy& policy);

/// A fitted model as seen by the sweep: scores rows, n_rows x n_classes.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual int n_classes() const = 0;
  virtual std::vector<double> scores(const Dataset& data) const = 0;
  std::vector<int> predict(const Dataset& data) const;
};

using Learner = std::function<std::shared_ptr<const Scorer>(const Dataset& train, std::uint64_t seed)>;

class LogisticScorer final : public Scorer {
 public:
  explicit LogisticScorer(LogisticFit fit) : fit_(std::move(fit)) {}
  int n_classes() const override { return fit_.model.n_classes(); }
  std::vector<double> scores(const Dataset& data) const override { return fit_.model.predict_scores(data); }
  const LogisticFit& fit() const noexcept { return fit_; }

 private:
  LogisticFit fit_;
};

Learner logistic_learner(LogisticOptions options);

struct SweepPoint {
  int percent = 0;
  double val_iou = 0.0;
  std::size_t n_train = 0;
};

struct SweepResult {
  int best_percent = 0;
  std::vector<SweepPoint> points;
  std::shared_ptr<const Scorer> model;
};

/// Fits one model per grid point (seed derived from `seed` and the percent),
/// scores validation IoU and keeps the argmax; ties go to the smaller
/// percent. Grid points run on up to `jobs` threads.
SweepResult sweep_undersample(const Dataset& train, const Dataset& val, const Learner& learner, std::uint64_t seed,
                              int jobs = 1, std::vector<int> grid = undersample_grid());

/// Four strictly increasing FWI cut points.
struct FwiThresholds {
  std::array<double, 4> cuts{5.0, 10.0, 20.0, 30.0};

  /// Throws ValidationError unless strictly increasing and finite.
  void validate() const;
};

/// Number of cut points strictly below the value.
int fwi_classifier(double fwi, const FwiThresholds& thresholds);

/// One-hot score rows for given classes.
std::vector<double> one_hot_scores(std::span<const int> classes, int n_classes);

/// Classes drawn uniformly from [0, n_classes).
std::vector<int> uniform_random_classes(std::size_t n, int n_classes, std::uint64_t seed);

}  // namespace firerisk
