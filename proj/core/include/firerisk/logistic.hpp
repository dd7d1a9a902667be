#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace firerisk {

/// Row-major design matrix with integer class labels.
struct Dataset {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> x;
  std::vector<int> y;

  std::span<const double> row(std::size_t r) const { return {x.data() + r * n_cols, n_cols}; }
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Throws ShapeError on inconsistent sizes and ValidationError on labels outside [0, n_classes).
  void validate(int n_classes) const;
};

/// Index of the largest score; ties go to the lower class.
int argmax_class(std::span<const double> scores);

struct LogisticOptions {
  int n_classes = 5;
  double l2 = 1e-4;
  /// Initial step; halved whenever a step would increase the loss.
  double learning_rate = 0.5;
  int epochs = 500;
  /// Stops early when the relative loss decrease of an epoch falls below this.
  double tolerance = 1e-9;
  /// Weights start at zero and steps are full-batch, so the fit does not
  /// depend on the seed; it is carried for the learner interface.
  std::uint64_t seed = 0;
};

/// Softmax regression. Weights are [class][feature] followed by one bias per class.
class LogisticModel {
 public:
  LogisticModel() = default;
  LogisticModel(std::size_t n_features, int n_classes);

  std::size_t n_features() const noexcept { return n_features_; }
  int n_classes() const noexcept { return n_classes_; }
  std::vector<double>& weights() noexcept { return w_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  std::size_t n_parameters() const noexcept { return w_.size(); }

  /// Row-major n_rows x n_classes probabilities; every row sums to 1.
  std::vector<double> predict_scores(const Dataset& data) const;
  std::vector<int> predict_class(const Dataset& data) const;

 private:
  std::size_t n_features_ = 0;
  int n_classes_ = 0;
  std::vector<double> w_;
};

/// Mean cross-entropy plus (l2 / 2) * ||W||^2 (biases unpenalised). Fills
/// `gradient` (same layout as the weights) when non-null.
double loss_and_gradient(const LogisticModel& model, const Dataset& data, double l2, std::vector<double>* gradient);

struct LogisticFit {
  LogisticModel model;
  /// Loss before the first step and after every accepted step; non-increasing.
  std::vector<double> loss_history;
};

/// Full-batch gradient descent with step halving. Throws Error with the
/// epoch and step size if the loss becomes non-finite.
LogisticFit fit_multinomial_logistic(const Dataset& data, const LogisticOptions& options = {});

}  // namespace firerisk
