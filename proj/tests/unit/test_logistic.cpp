#include <cmath>

#include <gtest/gtest.h>

#include "firerisk/error.hpp"
#include "firerisk/logistic.hpp"
#include "support/generators.hpp"

using namespace firerisk;

namespace {

Dataset random_dataset(gen::Source& src, std::size_t n, std::size_t p, int k) {
  Dataset d;
  d.n_rows = n;
  d.n_cols = p;
  d.x = src.reals(n * p, -2, 2);
  d.y = src.ints(n, 0, k - 1);
  return d;
}

}  // namespace

TEST(Logistic, GradientMatchesCentralDifferences) {
  gen::Source src(7);
  for (int batch = 0; batch < 50; ++batch) {
    const int k = src.integer(2, 5);
    const Dataset d = random_dataset(src, static_cast<std::size_t>(src.integer(1, 30)),
                                     static_cast<std::size_t>(src.integer(1, 6)), k);
    LogisticModel m(d.n_cols, k);
    for (auto& w : m.weights()) w = src.uniform(-1, 1);
    const double l2 = src.coin() ? 0.0 : 0.1;
    std::vector<double> g;
    loss_and_gradient(m, d, l2, &g);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.n_parameters(); ++i) {
      const double h = 1e-5, w0 = m.weights()[i];
      m.weights()[i] = w0 + h;
      const double up = loss_and_gradient(m, d, l2, nullptr);
      m.weights()[i] = w0 - h;
      const double down = loss_and_gradient(m, d, l2, nullptr);
      m.weights()[i] = w0;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::fabs(fd - g[i]) / std::max(1e-3, std::fabs(fd) + std::fabs(g[i])));
    }
    EXPECT_LT(worst, 1e-4) << "batch " << batch;
  }
}

TEST(Logistic, ZeroWeightsAreUniform) {
  gen::Source src(8);
  const Dataset d = random_dataset(src, 4, 3, 5);
  const LogisticModel m(3, 5);
  for (double s : m.predict_scores(d)) EXPECT_DOUBLE_EQ(s, 0.2);
  EXPECT_NEAR(loss_and_gradient(m, d, 0.0, nullptr), std::log(5.0), 1e-12);
  // All-equal scores predict the lowest class.
  for (int c : m.predict_class(d)) EXPECT_EQ(c, 0);
}

TEST(Logistic, ScoresSumToOne) {
  gen::Source src(9);
  const Dataset d = random_dataset(src, 50, 4, 5);
  LogisticModel m(4, 5);
  for (auto& w : m.weights()) w = src.uniform(-30, 30);
  const auto s = m.predict_scores(d);
  for (std::size_t r = 0; r < d.n_rows; ++r) {
    double sum = 0;
    for (int c = 0; c < 5; ++c) {
      EXPECT_GE(s[r * 5 + c], 0.0);
      sum += s[r * 5 + c];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Logistic, SeparableDataIsLearned) {
  Dataset d;
  d.n_cols = 1;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    d.x.push_back(c * 4.0 - 4.0 + 0.1 * (i % 5));
    d.y.push_back(c);
  }
  d.n_rows = d.y.size();
  LogisticOptions opt;
  opt.n_classes = 3;
  opt.l2 = 0.0;
  const auto fit = fit_multinomial_logistic(d, opt);
  EXPECT_EQ(fit.model.predict_class(d), d.y);
  for (std::size_t i = 1; i < fit.loss_history.size(); ++i) EXPECT_LE(fit.loss_history[i], fit.loss_history[i - 1]);
  EXPECT_LT(fit.loss_history.back(), fit.loss_history.front());
}

TEST(Logistic, LossNonIncreasingOnNoise) {
  gen::Source src(10);
  const Dataset d = random_dataset(src, 200, 5, 5);
  const auto fit = fit_multinomial_logistic(d);
  for (std::size_t i = 1; i < fit.loss_history.size(); ++i) ASSERT_LE(fit.loss_history[i], fit.loss_history[i - 1]);
}

TEST(Dataset, ValidationAndSubset) {
  Dataset d;
  d.n_rows = 2;
  d.n_cols = 2;
  d.x = {1, 2, 3, 4};
  d.y = {0, 7};
  EXPECT_THROW(d.validate(5), ValidationError);
  d.y = {0, 1};
  d.x.pop_back();
  EXPECT_THROW(d.validate(5), ShapeError);
  d.x.push_back(4);
  const std::vector<std::size_t> rows = {1};
  const Dataset s = d.subset(rows);
  EXPECT_EQ(s.x, (std::vector<double>{3, 4}));
  EXPECT_EQ(s.y, (std::vector<int>{1}));
  EXPECT_EQ(argmax_class(std::vector<double>{0.3, 0.3, 0.1}), 0);
}
