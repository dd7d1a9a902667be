#include "firerisk/models.hpp"

#include <algorithm>
#include <cmath>

#include "firerisk/error.hpp"
#include "firerisk/metrics.hpp"
#include "firerisk/parallel.hpp"
#include "firerisk/random.hpp"

namespace firerisk {

void UndersamplePolicy::validate() const {
  if (percent < 5 || percent > 100 || percent % 5 != 0) {
    throw ValidationError("undersampling percent " + std::to_string(percent) + " is not on the 5% grid");
  }
}

std::vector<int> undersample_grid() {
  std::vector<int> g;
  for (int p = 5; p <= 100; p += 5) g.push_back(p);
  return g;
}

std::vector<std::size_t> undersample(std::span<const int> labels, const UndersamplePolicy& policy) {
  policy.validate();
  std::vector<std::size_t> zeros, kept;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      zeros.push_back(i);
    } else {
      kept.push_back(i);
    }
  }
  // ceil(percent * n0 / 100) in integers.
  const std::size_t n0 = zeros.size();
  const std::size_t take = (static_cast<std::size_t>(policy.percent) * n0 + 99) / 100;
  Rng rng(policy.seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n0 - i));
    std::swap(zeros[i], zeros[j]);
  }
  kept.insert(kept.end(), zeros.begin(), zeros.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<int> Scorer::predict(const Dataset& data) const {
  const auto s = scores(data);
  const auto k = static_cast<std::size_t>(n_classes());
  std::vector<int> out(data.n_rows);
  for (std::size_t r = 0; r < data.n_rows; ++r) out[r] = argmax_class(std::span(s).subspan(r * k, k));
  return out;
}

Learner logistic_learner(LogisticOptions options) {
  return [options](const Dataset& train, std::uint64_t seed) -> std::shared_ptr<const Scorer> {
    LogisticOptions o = options;
    o.seed = seed;
    return std::make_shared<LogisticScorer>(fit_multinomial_logistic(train, o));
  };
}

SweepResult sweep_undersample(const Dataset& train, const Dataset& val, const Learner& learner, std::uint64_t seed,
                              int jobs, std::vector<int> grid) {
  if (grid.empty()) throw ValidationError("sweep_undersample: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (int p : grid) UndersamplePolicy{p, 0}.validate();
  if (val.n_rows == 0) throw ValidationError("sweep_undersample: empty validation set");

  std::vector<SweepPoint> points(grid.size());
  std::vector<std::shared_ptr<const Scorer>> models(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(grid[i]));
    const auto rows = undersample(train.y, UndersamplePolicy{grid[i], s});
    const Dataset sub = train.subset(rows);
    models[i] = learner(sub, s);
    points[i] = {grid[i], ordinal_iou(val.y, models[i]->predict(val)), rows.size()};
  });

  SweepResult out;
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].val_iou > points[best].val_iou) best = i;
  }
  out.best_percent = points[best].percent;
  out.points = std::move(points);
  out.model = models[best];
  return out;
}

void FwiThresholds::validate() const {
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!std::isfinite(cuts[i])) throw ValidationError("FWI thresholds must be finite");
    if (i > 0 && !(cuts[i] > cuts[i - 1])) throw ValidationError("FWI thresholds must be strictly increasing");
  }
}

int fwi_classifier(double fwi, const FwiThresholds& t) {
  int c = 0;
  for (double cut : t.cuts) {
    if (cut < fwi) ++c;
  }
  return c;
}

std::vector<double> one_hot_scores(std::span<const int> classes, int n_classes) {
  const auto k = static_cast<std::size_t>(n_classes);
  std::vector<double> s(classes.size() * k, 0.0);
  for (std::size_t r = 0; r < classes.size(); ++r) {
    if (classes[r] < 0 || classes[r] >= n_classes) throw ValidationError("one_hot_scores: class out of range");
    s[r * k + static_cast<std::size_t>(classes[r])] = 1.0;
  }
  return s;
}

std::vector<int> uniform_random_classes(std::size_t n, int n_classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> out(n);
  for (auto& c : out) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
  return out;
}

}  // namespace firerisk
