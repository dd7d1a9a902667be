#include "firerisk/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"

namespace firerisk {

namespace {

MetricSet score(std::span<const int> truth, std::span<const int> pred, bool binary) {
  MetricSet m;
  m.n_samples = truth.size();
  const auto prf = binary_prf(truth, pred);
  m.f1 = prf.f1;
  m.precision = prf.precision;
  m.recall = prf.recall;
  if (!binary) {
    m.iou = ordinal_iou(truth, pred);
    if (!truth.empty()) m.auoc = auoc(ConfusionMatrix::from_labels(truth, pred));
  }
  return m;
}

nlohmann::ordered_json metrics_json(const MetricSet& m) {
  nlohmann::ordered_json j;
  j["f1"] = m.f1;
  j["prec"] = m.precision;
  j["rec"] = m.recall;
  if (m.iou) j["iou"] = *m.iou;
  if (m.auoc) j["auoc"] = *m.auoc;
  j["n"] = m.n_samples;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

MetricReport evaluate(const PredictionSet& set, const std::vector<RiskLabelSeries>& truth,
                      const TemporalSplit& temporal_split, Split split) {
  check_coverage(set, truth, temporal_split, split);

  std::map<std::pair<std::string, Date>, const PredictionRow*> by_key;
  for (const auto& r : set.rows) by_key[{r.department_id, r.date}] = &r;

  // department -> (truth, pred) in date order
  std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> rows;
  std::set<std::string> seen;
  for (const auto& s : truth) {
    if (s.target != set.target) continue;
    if (!seen.insert(s.department_id).second) {
      throw ValidationError("evaluate: two label series for department " + s.department_id);
    }
    auto& [t, p] = rows[s.department_id];
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
      if (temporal_split.assign(s.dates[i]) != split) continue;
      const PredictionRow& r = *by_key.at({s.department_id, s.dates[i]});
      t.push_back(set.binary ? (s.labels[i] >= 1 ? 1 : 0) : s.labels[i]);
      p.push_back(set.predicted_class(r));
    }
  }

  MetricReport rep;
  rep.model = set.model;
  rep.target = set.target;
  rep.binary = set.binary;
  rep.split = split;
  std::vector<int> all_t, all_p;
  AreaScores area;
  std::vector<double> f1s, precs, recs, ious;
  for (const auto& [dept, tp] : rows) {
    const auto& [t, p] = tp;
    if (t.empty()) continue;
    all_t.insert(all_t.end(), t.begin(), t.end());
    all_p.insert(all_p.end(), p.begin(), p.end());
    const MetricSet m = score(t, p, set.binary);
    rep.per_department.emplace_back(dept, m);
    if (std::any_of(t.begin(), t.end(), [](int v) { return v > 0; })) {
      area.departments.push_back(dept);
      f1s.push_back(m.f1);
      precs.push_back(m.precision);
      recs.push_back(m.recall);
      if (m.iou) ious.push_back(*m.iou);
    }
  }
  if (all_t.empty()) throw ValidationError("evaluate: no truth rows in the " + std::string(to_string(split)) + " split");
  rep.global = score(all_t, all_p, set.binary);
  if (!set.binary) rep.confusion = ConfusionMatrix::from_labels(all_t, all_p);
  if (!area.departments.empty()) {
    area.f1 = area_score(f1s);
    area.precision = area_score(precs);
    area.recall = area_score(recs);
    if (!set.binary) area.iou = area_score(ious);
    rep.area = std::move(area);
  }
  return rep;
}

nlohmann::ordered_json report_to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["target"] = to_string(r.target);
  j["binary"] = r.binary;
  j["split"] = to_string(r.split);
  j["global"] = metrics_json(r.global);
  auto& per = j["per_department"] = nlohmann::ordered_json::object();
  for (const auto& [dept, m] : r.per_department) per[dept] = metrics_json(m);
  if (r.area) {
    nlohmann::ordered_json a;
    a["f1"] = r.area->f1;
    a["prec"] = r.area->precision;
    a["rec"] = r.area->recall;
    if (r.area->iou) a["iou"] = *r.area->iou;
    a["departments"] = r.area->departments;
    j["area"] = std::move(a);
  } else {
    j["area"] = nullptr;
  }
  if (!r.binary) {
    auto& cm = j["confusion"] = nlohmann::ordered_json::array();
    for (int t = 0; t < r.confusion.n_classes(); ++t) {
      auto row = nlohmann::ordered_json::array();
      for (int p = 0; p < r.confusion.n_classes(); ++p) row.push_back(r.confusion.at(t, p));
      cm.push_back(std::move(row));
    }
  }
  return j;
}

void write_report_json(const std::vector<MetricReport>& reports, const std::filesystem::path& path) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& r : reports) j.push_back(report_to_json(r));
  write_text(path, j.dump(2) + "\n");
}

void write_report_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"model", "target", "f1", "precision", "recall", "iou", "auoc", "area_f1", "area_precision", "area_recall",
           "area_iou"});
  auto opt = [&](const std::optional<double>& v) {
    if (v) {
      out.field(*v);
    } else {
      out.field(std::string_view());
    }
  };
  for (const auto& r : reports) {
    out.field(r.model).field(to_string(r.target));
    out.field(r.global.f1).field(r.global.precision).field(r.global.recall);
    opt(r.global.iou);
    opt(r.global.auoc);
    if (r.area) {
      out.field(r.area->f1).field(r.area->precision).field(r.area->recall);
      opt(r.area->iou);
    } else {
      for (int i = 0; i < 4; ++i) out.field(std::string_view());
    }
    out.end_row();
  }
  out.close();
}

void write_per_department_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"model", "target", "department", "f1", "precision", "recall", "iou", "auoc", "n_samples", "in_area"});
  for (const auto& r : reports) {
    for (const auto& [dept, m] : r.per_department) {
      const bool in_area =
          r.area && std::find(r.area->departments.begin(), r.area->departments.end(), dept) != r.area->departments.end();
      out.field(r.model).field(to_string(r.target)).field(dept).field(m.f1).field(m.precision).field(m.recall);
      if (m.iou) {
        out.field(*m.iou);
      } else {
        out.field(std::string_view());
      }
      if (m.auoc) {
        out.field(*m.auoc);
      } else {
        out.field(std::string_view());
      }
      out.field(static_cast<long long>(m.n_samples)).field(in_area ? 1 : 0);
      out.end_row();
    }
  }
  out.close();
}

}  // namespace firerisk
