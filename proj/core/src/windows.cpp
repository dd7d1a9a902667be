#include "firerisk/windows.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "firerisk/error.hpp"

namespace firerisk {

WindowExport build_windows(const FeatureTable& table, const std::vector<RiskLabelSeries>& labels, Target target,
                           int window, const std::vector<std::string>& features) {
  if (window < 1) throw ValidationError("build_windows: window must be >= 1");
  WindowExport out;
  out.window = window;
  out.feature_names = features.empty() ? table.column_names() : features;
  std::vector<std::size_t> cols;
  for (const auto& f : out.feature_names) cols.push_back(table.column_index(f));

  std::map<std::string, const RiskLabelSeries*> by_dept;
  for (const auto& s : labels) {
    if (s.target == target) by_dept[s.department_id] = &s;
  }

  const auto w = static_cast<std::size_t>(window);
  std::size_t start = 0;
  while (start < table.n_rows()) {
    std::size_t end = start;
    const std::string& dept = table.departments()[start];
    while (end < table.n_rows() && table.departments()[end] == dept) ++end;
    for (std::size_t r = start + 1; r < end; ++r) {
      if (table.dates()[r] - table.dates()[r - 1] != 1) {
        throw ValidationError("build_windows: department " + dept + " has a date gap after " +
                              table.dates()[r - 1].iso());
      }
    }
    auto it = by_dept.find(dept);
    if (it == by_dept.end()) throw ValidationError("build_windows: no " + std::string(to_string(target)) +
                                                   " labels for department " + dept);
    const RiskLabelSeries& s = *it->second;

    for (std::size_t r = start; r < end; ++r) {
      if (r - start + 1 < w) {
        ++out.skipped;
        continue;
      }
      const Date d = table.dates()[r];
      if (s.dates.empty() || d < s.dates.front() || d > s.dates.back()) {
        throw ValidationError("build_windows: no label for " + dept + " " + d.iso());
      }
      const auto li = static_cast<std::size_t>(d - s.dates.front());
      if (li >= s.dates.size() || s.dates[li] != d) {
        throw ValidationError("build_windows: labels for " + dept + " are not contiguous");
      }
      out.windows.push_back({dept, d, table.splits()[r], s.labels[li]});
      for (std::size_t t = r + 1 - w; t <= r; ++t) {
        for (std::size_t c : cols) out.values.push_back(static_cast<float>(table.column(c)[t]));
      }
    }
    start = end;
  }
  return out;
}

void write_windows(const WindowExport& wx, const std::filesystem::path& path) {
  nlohmann::ordered_json h;
  h["format"] = "firerisk-windows";
  h["version"] = 1;
  h["dtype"] = "float32le";
  h["order"] = "window,time,feature";
  h["shape"] = {wx.windows.size(), wx.window, wx.feature_names.size()};
  h["feature_names"] = wx.feature_names;
  h["skipped"] = wx.skipped;
  auto& meta = h["windows"] = nlohmann::ordered_json::array();
  for (const auto& w : wx.windows) {
    meta.push_back({{"department", w.department_id},
                    {"end_date", w.end_date.iso()},
                    {"split", to_string(w.split)},
                    {"label", w.label}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << h.dump() << '\n';
  std::vector<char> buf(wx.values.size() * 4);
  for (std::size_t i = 0; i < wx.values.size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(wx.values[i]);
    for (int b = 0; b < 4; ++b) buf[i * 4 + static_cast<std::size_t>(b)] = static_cast<char>((u >> (8 * b)) & 0xFF);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("failed writing " + path.string());
}

WindowExport read_windows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IntegrityError(path.string() + ": missing header");
  WindowExport wx;
  std::size_t n = 0, nf = 0;
  try {
    const auto h = nlohmann::json::parse(line);
    if (h.at("format") != "firerisk-windows") throw IntegrityError(path.string() + ": not a windows file");
    n = h.at("shape").at(0).get<std::size_t>();
    wx.window = h.at("shape").at(1).get<int>();
    nf = h.at("shape").at(2).get<std::size_t>();
    wx.feature_names = h.at("feature_names").get<std::vector<std::string>>();
    wx.skipped = h.at("skipped").get<std::size_t>();
    for (const auto& m : h.at("windows")) {
      wx.windows.push_back({m.at("department").get<std::string>(), Date::parse(m.at("end_date").get<std::string>()),
                            split_from_string(m.at("split").get<std::string>()), m.at("label").get<int>()});
    }
  } catch (const IntegrityError&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegrityError(path.string() + ": corrupt header: " + e.what());
  }
  if (wx.windows.size() != n || wx.feature_names.size() != nf) {
    throw IntegrityError(path.string() + ": header counts are inconsistent");
  }
  const std::size_t count = n * static_cast<std::size_t>(wx.window) * nf;
  std::vector<char> buf(count * 4);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size() || in.peek() != std::char_traits<char>::eof()) {
    throw IntegrityError(path.string() + ": payload size does not match the header");
  }
  wx.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) {
      u |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i * 4 + static_cast<std::size_t>(b)])) << (8 * b);
    }
    wx.values[i] = std::bit_cast<float>(u);
  }
  return wx;
}

}  // namespace firerisk
