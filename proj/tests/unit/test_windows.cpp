#include <gtest/gtest.h>

#include "firerisk/error.hpp"
#include "firerisk/windows.hpp"
#include "support/generators.hpp"
#include "support/temp_dir.hpp"

using namespace firerisk;

namespace {

struct Fixture {
  FeatureTable table;
  std::vector<RiskLabelSeries> labels;
};

Fixture fixture(std::size_t days, gen::Source& src, const std::vector<std::string>& deps = {"D1"}) {
  Fixture f;
  std::vector<Date> dates;
  for (std::size_t i = 0; i < days; ++i) dates.push_back(Date::parse("2022-12-25") + static_cast<int>(i));
  std::vector<Split> splits;
  for (Date d : dates) splits.push_back(d.year() == 2022 ? Split::Train : Split::Test);
  for (const auto& dep : deps) {
    f.table.add_rows(dep, dates, splits);
    RiskLabelSeries s;
    s.department_id = dep;
    s.dates = dates;
    s.labels = src.ints(days, 0, 4);
    s.values.assign(days, 0.0);
    f.labels.push_back(s);
  }
  f.table.add_column("a", src.reals(f.table.n_rows(), -1, 1));
  f.table.add_column("b", src.reals(f.table.n_rows(), -1, 1));
  return f;
}

}  // namespace

TEST(Windows, CountsAndSkips) {
  gen::Source src(90);
  auto f = fixture(10, src);
  auto w = build_windows(f.table, f.labels, Target::FO);
  EXPECT_EQ(w.windows.size(), 1u);
  EXPECT_EQ(w.skipped, 9u);
  f = fixture(12, src, {"D1", "D2"});
  w = build_windows(f.table, f.labels, Target::FO);
  EXPECT_EQ(w.windows.size(), 6u);
  EXPECT_EQ(w.values.size(), 6u * 10u * 2u);
  EXPECT_EQ(w.windows[0].end_date, Date::parse("2023-01-03"));
  EXPECT_EQ(w.windows[0].split, Split::Test);
  EXPECT_EQ(w.windows[0].label, f.labels[0].labels[9]);
}

TEST(Windows, ValuesAreTheTrailingRows) {
  gen::Source src(91);
  const auto f = fixture(15, src);
  const auto w = build_windows(f.table, f.labels, Target::FO, 4, {"b"});
  ASSERT_EQ(w.feature_names, std::vector<std::string>{"b"});
  for (std::size_t k = 0; k < w.windows.size(); ++k) {
    const auto end = *f.table.find_row("D1", w.windows[k].end_date);
    for (std::size_t t = 0; t < 4; ++t) {
      EXPECT_EQ(w.values[k * 4 + t], static_cast<float>(f.table.column("b")[end - 3 + t]));
    }
  }
}

TEST(Windows, CausalUnderFuturePerturbation) {
  gen::Source src(92);
  for (int i = 0; i < 30; ++i) {
    auto f = fixture(25, src);
    const auto before = build_windows(f.table, f.labels, Target::FO, 5);
    const std::size_t cut = static_cast<std::size_t>(src.integer(0, 24));
    for (std::size_t c = 0; c < f.table.n_cols(); ++c) {
      for (std::size_t r = cut + 1; r < f.table.n_rows(); ++r) f.table.column(c)[r] = src.uniform(50, 60);
    }
    for (std::size_t r = cut + 1; r < 25; ++r) f.labels[0].labels[r] = src.integer(0, 4);
    const auto after = build_windows(f.table, f.labels, Target::FO, 5);
    const Date cut_date = f.table.dates()[cut];
    for (std::size_t k = 0; k < before.windows.size(); ++k) {
      if (before.windows[k].end_date > cut_date) continue;
      EXPECT_EQ(before.windows[k].label, after.windows[k].label);
      for (std::size_t v = 0; v < 5 * 2; ++v) ASSERT_EQ(before.values[k * 10 + v], after.values[k * 10 + v]);
    }
  }
}

TEST(Windows, FileRoundTripAndCorruption) {
  testing_support::TempDir tmp;
  gen::Source src(93);
  const auto f = fixture(14, src, {"D1", "D2"});
  const auto w = build_windows(f.table, f.labels, Target::FO);
  write_windows(w, tmp / "w.bin");
  const auto back = read_windows(tmp / "w.bin");
  EXPECT_EQ(back.window, w.window);
  EXPECT_EQ(back.feature_names, w.feature_names);
  EXPECT_EQ(back.values, w.values);
  ASSERT_EQ(back.windows.size(), w.windows.size());
  EXPECT_EQ(back.windows[3].end_date, w.windows[3].end_date);
  EXPECT_EQ(back.windows[3].department_id, w.windows[3].department_id);

  auto bytes = testing_support::read_text(tmp / "w.bin");
  bytes.resize(bytes.size() - 3);
  testing_support::write_text(tmp / "short.bin", bytes);
  EXPECT_THROW(read_windows(tmp / "short.bin"), IntegrityError);
}

TEST(Windows, MissingLabelsRejected) {
  gen::Source src(94);
  auto f = fixture(12, src);
  f.labels[0].dates.pop_back();
  f.labels[0].labels.pop_back();
  f.labels[0].values.pop_back();
  EXPECT_THROW(build_windows(f.table, f.labels, Target::FO), Error);
}
