#include "firerisk/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "firerisk/error.hpp"

namespace firerisk {

namespace {

void check_pair(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) {
    throw ValidationError("metrics: " + std::to_string(truth.size()) + " truth labels vs " +
                          std::to_string(pred.size()) + " predictions");
  }
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int n_classes)
    : k_(n_classes), counts_(static_cast<std::size_t>(n_classes * n_classes), 0) {
  if (n_classes < 1) throw ValidationError("ConfusionMatrix: need at least one class");
}

ConfusionMatrix ConfusionMatrix::from_labels(std::span<const int> truth, std::span<const int> pred, int n_classes) {
  check_pair(truth, pred);
  ConfusionMatrix m(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n_classes || pred[i] < 0 || pred[i] >= n_classes) {
      throw ValidationError("ConfusionMatrix: label outside [0, " + std::to_string(n_classes) + ") at sample " +
                            std::to_string(i));
    }
    ++m.at(truth[i], pred[i]);
  }
  return m;
}

std::int64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

BinaryScores binary_prf(std::span<const int> truth, std::span<const int> pred) {
  check_pair(truth, pred);
  BinaryScores s;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] >= 1;
    const bool p = pred[i] >= 1;
    s.tp += t && p;
    s.fp += !t && p;
    s.fn += t && !p;
  }
  if (s.tp + s.fp + s.fn == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = s.tp + s.fp > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp) : 0.0;
  s.recall = s.tp + s.fn > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn) : 0.0;
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

double ordinal_iou(std::span<const int> truth, std::span<const int> pred) {
  check_pair(truth, pred);
  std::int64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    inter += std::min(truth[i], pred[i]);
    uni += std::max(truth[i], pred[i]);
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double auoc(const ConfusionMatrix& c) {
  const int k = c.n_classes();
  if (k < 2) throw ValidationError("auoc: need at least two classes");
  const std::int64_t n = c.total();
  if (n == 0) throw ValidationError("auoc: empty confusion matrix");
  std::int64_t penalty = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) penalty += c.at(i, j) * std::abs(i - j);
  }
  return static_cast<double>(penalty) / (static_cast<double>(n) * static_cast<double>(k - 1));
}

double area_score(std::span<const double> s) {
  if (s.empty()) throw ValidationError("area_score: no departments selected");
  if (s.size() == 1) return s[0];
  double integral = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) integral += 0.5 * (s[i - 1] + s[i]);
  const double v = integral / static_cast<double>(s.size() - 1);
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return std::clamp(v, *lo, *hi);
}

double area_score(std::span<const double> scores, const std::vector<bool>& mask) {
  if (mask.size() != scores.size()) throw ShapeError("area_score: mask size mismatch");
  std::vector<double> kept;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) kept.push_back(scores[i]);
  }
  return area_score(kept);
}

}  // namespace firerisk
