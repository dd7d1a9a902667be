#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "firerisk/error.hpp"
#include "firerisk/metrics.hpp"
#include "support/generators.hpp"

using namespace firerisk;

TEST(BinaryPrf, HandExample) {
  const auto s = binary_prf(std::vector<int>{0, 1, 0, 2}, std::vector<int>{0, 3, 1, 0});
  EXPECT_EQ(s.tp, 1);
  EXPECT_EQ(s.fp, 1);
  EXPECT_EQ(s.fn, 1);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.5);
}

TEST(BinaryPrf, DegenerateCases) {
  const auto none = binary_prf(std::vector<int>{1, 2}, std::vector<int>{0, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  const auto empty = binary_prf(std::vector<int>{0, 0}, std::vector<int>{0, 0});
  EXPECT_EQ(empty.f1, 1.0);
  EXPECT_EQ(binary_prf(std::vector<int>{0, 3, 4}, std::vector<int>{0, 1, 4}).f1, 1.0);
}

TEST(OrdinalIou, HandExamples) {
  EXPECT_DOUBLE_EQ(ordinal_iou(std::vector<int>{0, 2, 4}, std::vector<int>{0, 2, 1}), 0.5);
  EXPECT_EQ(ordinal_iou(std::vector<int>{0, 3}, std::vector<int>{0, 3}), 1.0);
  EXPECT_EQ(ordinal_iou(std::vector<int>{0, 0}, std::vector<int>{0, 0}), 1.0);
  EXPECT_EQ(ordinal_iou(std::vector<int>{1, 4}, std::vector<int>{0, 0}), 0.0);
}

TEST(OrdinalIou, SymmetricAndCloserIsBetter) {
  gen::Source src(70);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 30));
    const auto y = src.ints(n, 0, 4), p = src.ints(n, 0, 4);
    EXPECT_EQ(ordinal_iou(y, p), ordinal_iou(p, y));
    const double v = ordinal_iou(y, p);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  for (int y = 1; y <= 4; ++y) {
    for (int p = 0; p < 4; ++p) {
      const double here = ordinal_iou(std::vector<int>{y}, std::vector<int>{p});
      const double next = ordinal_iou(std::vector<int>{y}, std::vector<int>{p + 1});
      if (p < y) EXPECT_LE(here, next);
      else EXPECT_GE(here, next);
    }
  }
}

TEST(Auoc, HandExamples) {
  const std::vector<int> y = {0, 1, 2, 3, 4};
  EXPECT_EQ(auoc(ConfusionMatrix::from_labels(y, y)), 0.0);
  EXPECT_DOUBLE_EQ(auoc(ConfusionMatrix::from_labels(std::vector<int>{0, 4}, std::vector<int>{4, 0})), 1.0);
  std::vector<int> t(10, 2), p(10, 2);
  p[3] = 3;
  EXPECT_DOUBLE_EQ(auoc(ConfusionMatrix::from_labels(t, p)), 0.025);
  EXPECT_THROW(auoc(ConfusionMatrix(5)), ValidationError);
  EXPECT_THROW(ConfusionMatrix::from_labels(std::vector<int>{0}, std::vector<int>{5}), ValidationError);
  EXPECT_THROW(ConfusionMatrix::from_labels(std::vector<int>{0}, std::vector<int>{0, 1}), ValidationError);
}

TEST(Auoc, PermutationAndDuplicationInvariant) {
  gen::Source src(71);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 40));
    auto y = src.ints(n, 0, 4), p = src.ints(n, 0, 4);
    const double a = auoc(ConfusionMatrix::from_labels(y, p));
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    std::shuffle(idx.begin(), idx.end(), src.engine());
    std::vector<int> ys, ps;
    for (std::size_t j : idx) {
      ys.push_back(y[j]);
      ps.push_back(p[j]);
    }
    EXPECT_NEAR(auoc(ConfusionMatrix::from_labels(ys, ps)), a, 1e-15);
    ys.insert(ys.end(), y.begin(), y.end());
    ps.insert(ps.end(), p.begin(), p.end());
    EXPECT_NEAR(auoc(ConfusionMatrix::from_labels(ys, ps)), a, 1e-15);
  }
}

TEST(AreaScore, HandExamples) {
  EXPECT_DOUBLE_EQ(area_score(std::vector<double>{1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(area_score(std::vector<double>{0.5, 0.5, 0.5, 0.5}), 0.5);
  EXPECT_EQ(area_score(std::vector<double>{0.3}), 0.3);
  EXPECT_THROW(area_score(std::vector<double>{}), ValidationError);
  EXPECT_DOUBLE_EQ(area_score(std::vector<double>{1, 0.2, 0, 1}, {true, false, true, true}), 0.5);
  EXPECT_THROW(area_score(std::vector<double>{1}, {false}), ValidationError);
}

TEST(AreaScore, ConstantAndBoundsProperty) {
  gen::Source src(72);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 50));
    const double c = src.uniform(0, 1);
    EXPECT_NEAR(area_score(std::vector<double>(n, c)), c, 1e-12);
    const auto s = src.reals(n, 0, 1);
    const double a = area_score(s);
    EXPECT_GE(a, *std::min_element(s.begin(), s.end()) - 1e-12);
    EXPECT_LE(a, *std::max_element(s.begin(), s.end()) + 1e-12);
  }
}
