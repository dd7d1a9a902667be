#include "firerisk/predictions.hpp"

#include <cmath>
#include <map>
#include <set>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"
#include "firerisk/logistic.hpp"

namespace firerisk {

int PredictionSet::predicted_class(const PredictionRow& row) const {
  if (binary) return row.scores[1] > 0.5 ? 1 : 0;
  return argmax_class(row.scores);
}

std::vector<PredictionSet> ingest_predictions(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"model", "target", "department", "date"});
  const auto& h = in.header();
  bool binary;
  if (h.size() == 5 && h[4] == "p") {
    binary = true;
  } else if (h.size() == 9 && h[4] == "s0" && h[5] == "s1" && h[6] == "s2" && h[7] == "s3" && h[8] == "s4") {
    binary = false;
  } else {
    throw ParseError(in.source(), 1, "expected score columns s0..s4 or a single p column");
  }

  std::vector<PredictionSet> sets;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::set<std::tuple<std::string, std::string, std::string, Date>> seen;
  CsvRow row;
  while (in.next(row)) {
    const std::string model = in.text(row, 0);
    const std::string target_text = in.text(row, 1);
    if (model.empty()) in.fail(row, "empty model name");
    Target target;
    try {
      target = target_from_string(target_text);
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    PredictionRow r;
    r.department_id = in.text(row, 2);
    r.date = in.date(row, 3);
    const std::string where = " (department " + r.department_id + ", date " + r.date.iso() + ")";
    if (!seen.emplace(model, target_text, r.department_id, r.date).second) {
      in.fail(row, "duplicate prediction for model " + model + where);
    }
    if (binary) {
      const double p = in.number(row, 4);
      if (!(p >= 0.0 && p <= 1.0)) in.fail(row, "probability " + format_number(p) + " outside [0, 1]" + where);
      r.scores = {1.0 - p, p};
    } else {
      double sum = 0.0;
      for (std::size_t c = 0; c < 5; ++c) {
        const double s = in.number(row, 4 + c);
        if (!std::isfinite(s) || s < 0.0) in.fail(row, "score s" + std::to_string(c) + " is negative or missing" + where);
        r.scores.push_back(s);
        sum += s;
      }
      if (std::abs(sum - 1.0) > kScoreSumTolerance) {
        in.fail(row, "scores sum to " + format_number(sum) + ", expected 1" + where);
      }
    }
    auto [it, inserted] = index.emplace(std::pair(model, target_text), sets.size());
    if (inserted) sets.push_back({model, target, binary, {}});
    sets[it->second].rows.push_back(std::move(r));
  }
  return sets;
}

void write_predictions_csv(const std::vector<PredictionSet>& sets, const std::filesystem::path& path) {
  if (sets.empty()) throw ValidationError("write_predictions_csv: nothing to write");
  const bool binary = sets.front().binary;
  for (const auto& s : sets) {
    if (s.binary != binary) throw ValidationError("write_predictions_csv: cannot mix binary and class-score sets");
  }
  CsvWriter out(path);
  if (binary) {
    out.row({"model", "target", "department", "date", "p"});
  } else {
    out.row({"model", "target", "department", "date", "s0", "s1", "s2", "s3", "s4"});
  }
  for (const auto& s : sets) {
    for (const auto& r : s.rows) {
      out.field(s.model).field(to_string(s.target)).field(r.department_id).field(r.date);
      if (binary) {
        out.field(r.scores[1]);
      } else {
        for (double v : r.scores) out.field(v);
      }
      out.end_row();
    }
  }
  out.close();
}

void check_coverage(const PredictionSet& set, const std::vector<RiskLabelSeries>& truth,
                    const TemporalSplit& temporal_split, Split split) {
  std::set<std::string> known;
  std::set<std::pair<std::string, Date>> expected;
  for (const auto& s : truth) {
    if (s.target != set.target) continue;
    known.insert(s.department_id);
    for (Date d : s.dates) {
      if (temporal_split.assign(d) == split) expected.emplace(s.department_id, d);
    }
  }
  std::set<std::string> unknown;
  std::set<std::pair<std::string, Date>> covered;
  for (const auto& r : set.rows) {
    if (!known.count(r.department_id)) {
      unknown.insert(r.department_id);
      continue;
    }
    covered.emplace(r.department_id, r.date);
  }
  const std::string who = "predictions of " + set.model + "/" + std::string(to_string(set.target));
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw ValidationError(who + " name departments absent from the labels: " + list);
  }
  std::vector<std::pair<std::string, Date>> missing;
  for (const auto& key : expected) {
    if (!covered.count(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string list;
    const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      list += (i ? ", " : "") + missing[i].first + " " + missing[i].second.iso();
    }
    if (missing.size() > shown) list += ", ... (" + std::to_string(missing.size() - shown) + " more)";
    throw ValidationError(who + " miss " + std::to_string(missing.size()) + " (department, date) pairs of the " +
                          std::string(to_string(split)) + " split: " + list);
  }
}

}  // namespace firerisk
