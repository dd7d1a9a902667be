// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "firerisk/clustering.hpp"
#include "firerisk/encoding.hpp"
#include "firerisk/fwi.hpp"
#include "firerisk/labeling.hpp"
#include "firerisk/log.hpp"
#include "firerisk/metrics.hpp"
#include "firerisk/models.hpp"
#include "firerisk/pipeline.hpp"
#include "firerisk/synth.hpp"
#include "firerisk/windows.hpp"
#include "oracles/dtw_oracle.hpp"
#include "oracles/fwi_oracle.hpp"
#include "oracles/kmeans_oracle.hpp"
#include "support/generators.hpp"
#include "support/temp_dir.hpp"

using namespace firerisk;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kFwiTol = 1e-6;
constexpr double kFwiSeconds = 1.0;
constexpr double kCentroidRelTol = 1e-9;
constexpr double kDtwTol = 1e-12;
constexpr double kGradRelTol = 1e-4;
constexpr double kPipelineSeconds = 60.0;
constexpr double kAreaTol = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

template <typename... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// 1. Vectorised FWI chain against the scalar transcription.
Outcome fwi_equivalence() {
  gen::Source src(1);
  const Date first = Date::parse("2023-01-01");
  auto weather = [&](int day, double& t, double& h, double& w, double& r) {
    const double season = std::sin(2 * std::numbers::pi * (day - 100) / 365.0);
    t = 12 + 12 * season + src.uniform(-4, 4);
    h = std::clamp(60 - 25 * season + src.uniform(-15, 15), 5.0, 100.0);
    w = src.uniform(0, 40);
    r = src.coin(0.3) ? src.uniform(0, 25) : 0.0;
  };

  const std::size_t check_cells = 8;
  fwi::FwiRaster raster(check_cells);
  std::vector<oracle::FwiDay> state(check_cells, {85.0, 6.0, 15.0, 0, 0, 0, 0});
  std::vector<double> t(check_cells), h(check_cells), w(check_cells), r(check_cells);
  std::vector<double> o[7];
  for (auto& v : o) v.resize(check_cells);
  double worst = 0.0;
  for (int day = 0; day < 365; ++day) {
    const int month = static_cast<int>((first + day).month());
    for (std::size_t c = 0; c < check_cells; ++c) weather(day, t[c], h[c], w[c], r[c]);
    raster.step(t, h, w, r, month, o[0], o[1], o[2], o[3], o[4], o[5], o[6]);
    for (std::size_t c = 0; c < check_cells; ++c) {
      state[c] = oracle::fwi_day(state[c].ffmc, state[c].dmc, state[c].dc, t[c], h[c], w[c], r[c], month);
      const double want[7] = {state[c].ffmc, state[c].dmc, state[c].dc, state[c].isi,
                              state[c].bui,  state[c].fwi, state[c].dsr};
      for (int k = 0; k < 7; ++k) worst = std::max(worst, std::fabs(o[k][c] - want[k]));
    }
  }

  const std::size_t cells = 1000;
  std::vector<std::vector<double>> in(4 * 365, std::vector<double>(cells));
  for (int day = 0; day < 365; ++day) {
    for (std::size_t c = 0; c < cells; ++c) {
      weather(day, in[4 * day][c], in[4 * day + 1][c], in[4 * day + 2][c], in[4 * day + 3][c]);
    }
  }
  fwi::FwiRaster big(cells);
  std::vector<double> out[7];
  for (auto& v : out) v.resize(cells);
  const auto t0 = Clock::now();
  for (int day = 0; day < 365; ++day) {
    big.step(in[4 * day], in[4 * day + 1], in[4 * day + 2], in[4 * day + 3],
             static_cast<int>((first + day).month()), out[0], out[1], out[2], out[3], out[4], out[5], out[6]);
  }
  const double secs = seconds_since(t0);
  return {worst < kFwiTol && secs < kFwiSeconds,
          fmt("max abs diff %.3g (< %g); 365 days x 1000 cells in %.3f s (< %g s)", worst, kFwiTol, secs, kFwiSeconds)};
}

// 2. Exact 1-D k-means and monotone labels.
Outcome labeling_optimality() {
  gen::Source src(2);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = src.positive_with_repeats(static_cast<std::size_t>(src.integer(1, 80)), src.integer(1, 12));
    const auto want = oracle::kmeans_exhaustive(v, kPositiveLevels);
    const auto got = fit_ordinal_model(v);
    bool same = got.centroids.size() == want.centroids.size();
    for (std::size_t j = 0; same && j < want.centroids.size(); ++j) {
      same = std::fabs(got.centroids[j] - want.centroids[j]) <= kCentroidRelTol * std::max(1.0, want.centroids[j]);
    }
    mismatches += !same;
  }
  int violations = 0;
  const auto model = fit_ordinal_model(src.positive_with_repeats(200, 12));
  for (int i = 0; i < 10000; ++i) {
    double a = src.coin(0.05) ? 0.0 : src.uniform(0, 60), b = src.uniform(0, 60);
    if (a > b) std::swap(a, b);
    violations += assign_label(a, model) > assign_label(b, model);
  }
  return {mismatches == 0 && violations == 0,
          fmt("%d/1000 centroid mismatches vs exhaustive optimum; %d/10000 monotonicity violations", mismatches,
              violations)};
}

// 3. DTW against the full-matrix recurrence.
Outcome dtw_oracle() {
  gen::Source src(3);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto a = src.reals(static_cast<std::size_t>(src.integer(1, 20)), -5, 5);
    const auto b = src.reals(static_cast<std::size_t>(src.integer(1, 20)), -5, 5);
    worst = std::max(worst, std::fabs(dtw_distance(a, b) - oracle::dtw_full(a, b)));
  }
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = src.reals(static_cast<std::size_t>(src.integer(1, 20)), -5, 5);
    const auto b = src.reals(static_cast<std::size_t>(src.integer(1, 20)), -5, 5);
    bad += dtw_distance(a, b) != dtw_distance(b, a) || dtw_distance(a, a) != 0.0;
  }
  return {worst <= kDtwTol && bad == 0,
          fmt("max diff %.3g on 200 pairs (<= %g); %d/100 symmetry or identity failures", worst, kDtwTol, bad)};
}

// 4. Metric identities and hand examples.
Outcome metric_identities() {
  gen::Source src(4);
  const auto y = src.ints(500, 0, 4);
  const bool perfect = binary_prf(y, y).f1 == 1.0 && ordinal_iou(y, y) == 1.0 &&
                       auoc(ConfusionMatrix::from_labels(y, y)) == 0.0;
  const double iou = ordinal_iou(std::vector<int>{0, 2, 4}, std::vector<int>{0, 2, 1});
  const double au = auoc(ConfusionMatrix::from_labels(std::vector<int>{0, 4}, std::vector<int>{4, 0}));
  const double area = area_score(std::vector<double>{1, 0, 1});
  return {perfect && iou == 0.5 && au == 1.0 && area == 0.5,
          fmt("perfect: %s; iou example %.17g; auoc example %.17g; trapezoid example %.17g",
              perfect ? "F1=IoU=1, auoc=0" : "FAILED", iou, au, area)};
}

// 5. Nothing after the evaluated date leaks into encodings, past risk or windows.
Outcome leakage() {
  gen::Source src(5);
  int leaks = 0, checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 40;
    std::vector<Date> dates(n);
    std::vector<std::string> cats(n);
    std::vector<bool> train(n);
    for (std::size_t j = 0; j < n; ++j) {
      dates[j] = Date(src.integer(0, 20));
      cats[j] = std::string(1, static_cast<char>('a' + src.integer(0, 2)));
      train[j] = src.coin(0.7);
    }
    auto yv = src.reals(n, 0, 5);
    const Date cut(src.integer(0, 20));
    const auto before = ordered_target_encode(dates, cats, yv, train, 1.0, 1.0).values;
    for (std::size_t j = 0; j < n; ++j) {
      if (dates[j] > cut) {
        yv[j] = src.uniform(100, 200);
        train[j] = src.coin();
        cats[j] = "z";
      }
    }
    const auto after = ordered_target_encode(dates, cats, yv, train, 1.0, 1.0).values;
    for (std::size_t j = 0; j < n; ++j) {
      if (dates[j] <= cut) {
        ++checks;
        leaks += before[j] != after[j];
      }
    }

    auto labels = src.ints(60, 0, 4);
    const std::size_t t = static_cast<std::size_t>(src.integer(0, 59));
    const int h = src.integer(1, 6);
    const auto pr0 = past_risk_feature(labels, h);
    for (std::size_t j = t + 1; j < labels.size(); ++j) labels[j] = src.integer(0, 4);
    const auto pr1 = past_risk_feature(labels, h);
    for (std::size_t j = 0; j <= t; ++j) {
      ++checks;
      leaks += pr0[j] != pr1[j];
    }

    FeatureTable table;
    std::vector<Date> wd;
    for (int d = 0; d < 30; ++d) wd.push_back(Date::parse("2023-01-01") + d);
    table.add_rows("D1", wd, std::vector<Split>(wd.size(), Split::Test));
    table.add_column("x", src.reals(wd.size(), -1, 1));
    RiskLabelSeries ls{"D1", Target::FO, wd, src.ints(wd.size(), 0, 4), std::vector<double>(wd.size(), 0.0)};
    const auto w0 = build_windows(table, {ls}, Target::FO, 7);
    const std::size_t wc = static_cast<std::size_t>(src.integer(0, 29));
    for (std::size_t r = wc + 1; r < wd.size(); ++r) {
      table.column(0)[r] = src.uniform(10, 20);
      ls.labels[r] = src.integer(0, 4);
    }
    const auto w1 = build_windows(table, {ls}, Target::FO, 7);
    for (std::size_t k = 0; k < w0.windows.size(); ++k) {
      if (w0.windows[k].end_date > wd[wc]) continue;
      ++checks;
      leaks += w0.windows[k].label != w1.windows[k].label ||
               !std::equal(w0.values.begin() + static_cast<long>(k * 7), w0.values.begin() + static_cast<long>(k * 7 + 7),
                           w1.values.begin() + static_cast<long>(k * 7));
    }
  }
  return {leaks == 0, fmt("%d leaks across %d perturbed checks (encoding, past risk, windows)", leaks, checks)};
}

// 6. Sweep picks the known optimum; positives always survive undersampling.
class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(int c) : c_(c) {}
  int n_classes() const override { return 5; }
  std::vector<double> scores(const Dataset& d) const override {
    std::vector<double> s(d.n_rows * 5, 0.0);
    for (std::size_t r = 0; r < d.n_rows; ++r) s[r * 5 + static_cast<std::size_t>(c_)] = 1.0;
    return s;
  }

 private:
  int c_;
};

Outcome undersampling_protocol() {
  Dataset train, val;
  train.n_cols = val.n_cols = 1;
  for (int i = 0; i < 120; ++i) train.y.push_back(i < 100 ? 0 : 1 + i % 4);
  train.n_rows = train.y.size();
  train.x.assign(train.n_rows, 0.0);
  val.y = {2, 2, 2};
  val.n_rows = 3;
  val.x.assign(3, 0.0);
  // Predicts round(kept zeros / 20): class 2, the validation truth, exactly for 30..45 %.
  const Learner learner = [](const Dataset& d, std::uint64_t) {
    const auto n0 = static_cast<double>(std::count(d.y.begin(), d.y.end(), 0));
    return std::make_shared<const ConstantScorer>(std::min(4, static_cast<int>(std::lround(n0 / 20.0))));
  };
  const auto r = sweep_undersample(train, val, learner, 11);
  std::vector<int> percents;
  for (const auto& p : r.points) percents.push_back(p.percent);
  std::vector<int> grid;
  for (int p = 5; p <= 100; p += 5) grid.push_back(p);

  gen::Source src(6);
  int dropped = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto y = src.ints(static_cast<std::size_t>(src.integer(0, 100)), 0, 4);
    const auto kept = undersample(y, {5 * src.integer(1, 20), static_cast<std::uint64_t>(i)});
    std::size_t pos = 0, kept_pos = 0;
    for (int v : y) pos += v > 0;
    for (std::size_t k : kept) kept_pos += y[k] > 0;
    dropped += kept_pos != pos;
  }
  return {percents == grid && r.best_percent == 30 && dropped == 0,
          fmt("grid 5..100 step 5: %s; selected %d%% (expected 30%%); %d/1000 draws dropped a positive",
              percents == grid ? "exact" : "WRONG", r.best_percent, dropped)};
}

// 7. Analytic softmax gradient against central differences.
Outcome gradient_check() {
  gen::Source src(7);
  double worst = 0.0;
  for (int b = 0; b < 50; ++b) {
    Dataset d;
    d.n_rows = static_cast<std::size_t>(src.integer(1, 40));
    d.n_cols = static_cast<std::size_t>(src.integer(1, 8));
    d.x = src.reals(d.n_rows * d.n_cols, -2, 2);
    d.y = src.ints(d.n_rows, 0, 4);
    LogisticModel m(d.n_cols, 5);
    for (auto& w : m.weights()) w = src.uniform(-1, 1);
    std::vector<double> g;
    loss_and_gradient(m, d, 1e-2, &g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double h = 1e-5, w0 = m.weights()[i];
      m.weights()[i] = w0 + h;
      const double up = loss_and_gradient(m, d, 1e-2, nullptr);
      m.weights()[i] = w0 - h;
      const double down = loss_and_gradient(m, d, 1e-2, nullptr);
      m.weights()[i] = w0;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::fabs(fd - g[i]) / std::max(1e-3, std::fabs(fd) + std::fabs(g[i])));
    }
  }
  return {worst < kGradRelTol, fmt("max relative error %.3g over 50 batches (< %g)", worst, kGradRelTol)};
}

// 8. End-to-end run on the 3-department x 2-year fixture, twice.
Outcome end_to_end() {
  testing_support::TempDir tmp;
  SynthConfig s;  // 3 departments, 2 years
  write_synthetic_region(generate_synthetic_region(s), tmp / "data");
  std::string reports[2];
  double secs[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = tmp / ("out" + std::to_string(run));
    const PipelineConfig c = synthetic_pipeline_config(tmp / "data", s.start_year, s.n_years, out);
    const auto t0 = Clock::now();
    run_pipeline(c);
    secs[run] = seconds_since(t0);
    reports[run] = testing_support::read_text(out / "report.json");
  }
  const auto j = nlohmann::json::parse(reports[0]);
  auto iou = [&](const std::string& model, const std::string& target) {
    for (const auto& r : j) {
      if (r["model"] == model && r["target"] == target) return r["global"]["iou"].get<double>();
    }
    return std::nan("");
  };
  const double lf = iou("logistic", "fo"), rf = iou("random", "fo");
  const double lb = iou("logistic", "ba"), rb = iou("random", "ba");
  const bool same = reports[0] == reports[1];
  const double slowest = std::max(secs[0], secs[1]);
  return {slowest < kPipelineSeconds && same && lf > rf && lb > rb,
          fmt("runs %.1f s / %.1f s (< %g s); report.json %s; test IoU logistic vs random: FO %.3f > %.3f, "
              "BA %.3f > %.3f",
              secs[0], secs[1], kPipelineSeconds, same ? "byte-identical" : "DIFFERS", lf, rf, lb, rb)};
}

// 9. Area score against the mean and the per-department range.
Outcome area_consistency() {
  gen::Source src(9);
  double worst = 0.0;
  int outside = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = static_cast<std::size_t>(src.integer(1, 100));
    const double c = src.uniform(0, 1);
    worst = std::max(worst, std::fabs(area_score(std::vector<double>(n, c)) - c));
    const auto v = src.reals(n, 0, 1);
    const double a = area_score(v);
    outside += a < *std::min_element(v.begin(), v.end()) || a > *std::max_element(v.begin(), v.end());
  }
  return {worst <= kAreaTol && outside == 0,
          fmt("constant-score deviation %.3g (<= %g); %d/1000 outside [min, max]", worst, kAreaTol, outside)};
}

}  // namespace

int main() {
  log::set_min_level(log::Level::Warn);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"FWI oracle equivalence", fwi_equivalence},
      {"labeling optimality", labeling_optimality},
      {"DTW oracle", dtw_oracle},
      {"metric identities", metric_identities},
      {"leakage", leakage},
      {"undersampling protocol", undersampling_protocol},
      {"gradient check", gradient_check},
      {"end-to-end determinism", end_to_end},
      {"area score consistency", area_consistency},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
