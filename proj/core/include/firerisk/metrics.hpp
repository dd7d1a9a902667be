#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace firerisk {

/// K x K counts; rows are the true class, columns the predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int n_classes = 5);
  /// Throws ValidationError on differing lengths or labels outside [0, K).
  static ConfusionMatrix from_labels(std::span<const int> truth, std::span<const int> pred, int n_classes = 5);

  int n_classes() const noexcept { return k_; }
  std::int64_t& at(int truth, int pred) { return counts_[static_cast<std::size_t>(truth * k_ + pred)]; }
  std::int64_t at(int truth, int pred) const { return counts_[static_cast<std::size_t>(truth * k_ + pred)]; }
  std::int64_t total() const noexcept;
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

 private:
  int k_;
  std::vector<std::int64_t> counts_;
};

struct BinaryScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Precision, recall and F1 of "class >= 1". A ratio with a zero
/// denominator is 0, except that no true and no predicted positives at all
/// count as perfect (all three equal 1).
BinaryScores binary_prf(std::span<const int> truth, std::span<const int> pred);

/// sum_i min(y_i, p_i) / sum_i max(y_i, p_i); 1 when the denominator is 0.
double ordinal_iou(std::span<const int> truth, std::span<const int> pred);

/// Normalised ordinal penalty sum C[i][j] |i - j| / (N (K - 1)): 0 on a
/// diagonal matrix, 1 when all mass sits at maximal distance. Throws
/// ValidationError on an empty matrix or K < 2.
double auoc(const ConfusionMatrix& confusion);

/// Trapezoid integral of the score sequence with unit spacing, divided by
/// the integral of a constant 1 over the same span; a single score is
/// returned unchanged. Throws ValidationError on empty input.
double area_score(std::span<const double> scores);

/// area_score over the entries where `mask` is set.
double area_score(std::span<const double> scores, const std::vector<bool>& mask);

}  // namespace firerisk
