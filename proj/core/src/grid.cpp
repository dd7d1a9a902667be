#include "firerisk/grid.hpp"

#include <algorithm>
#include <cmath>

#include "firerisk/csv.hpp"
#include "firerisk/error.hpp"

namespace firerisk {

void GridSpec::validate() const {
  if (cell_size_m != kCellSizeM) {
    throw ValidationError("grid " + department_id + ": cell_size_m must be 2000, got " + format_number(cell_size_m));
  }
  if (n_x < 1 || n_y < 1) {
    throw ValidationError("grid " + department_id + ": n_x and n_y must be >= 1");
  }
}

Cell GridSpec::snap(double x, double y) const {
  const double fx = (x - origin_x) / cell_size_m;
  const double fy = (origin_y - y) / cell_size_m;
  const Cell c{static_cast<int>(std::floor(fy)), static_cast<int>(std::floor(fx))};
  if (!contains(c)) {
    throw ValidationError("point (" + format_number(x) + ", " + format_number(y) + ") lies outside grid " +
                          department_id);
  }
  return c;
}

Cell nearest_weather_point(const GridSpec& grid, Cell cell) {
  auto pick = [](int i, int n) {
    const int p = static_cast<int>(std::floor((i + 0.5) * kWeatherLatticeSize / n));
    return std::clamp(p, 0, kWeatherLatticeSize - 1);
  };
  return Cell{pick(cell.row, grid.n_y), pick(cell.col, grid.n_x)};
}

std::map<std::string, GridSpec> read_grids_csv(const std::filesystem::path& path) {
  CsvReader in(path);
  in.expect_prefix({"department", "origin_x", "origin_y", "cell_size_m", "n_x", "n_y"});
  std::map<std::string, GridSpec> out;
  CsvRow row;
  while (in.next(row)) {
    GridSpec g;
    g.department_id = in.text(row, 0);
    g.origin_x = in.number(row, 1);
    g.origin_y = in.number(row, 2);
    g.cell_size_m = in.number(row, 3);
    g.n_x = static_cast<int>(in.integer(row, 4));
    g.n_y = static_cast<int>(in.integer(row, 5));
    try {
      g.validate();
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    if (!out.emplace(g.department_id, g).second) in.fail(row, "duplicate department " + g.department_id);
  }
  return out;
}

void write_grids_csv(const std::map<std::string, GridSpec>& grids, const std::filesystem::path& path) {
  CsvWriter out(path);
  out.row({"department", "origin_x", "origin_y", "cell_size_m", "n_x", "n_y"});
  for (const auto& [id, g] : grids) {
    out.field(id).field(g.origin_x).field(g.origin_y).field(g.cell_size_m).field(g.n_x).field(g.n_y);
    out.end_row();
  }
  out.close();
}

std::map<std::string, Gazetteer> read_gazetteer_csv(const std::filesystem::path& path,
                                                    const std::map<std::string, GridSpec>& grids) {
  CsvReader in(path);
  in.expect_prefix({"location_ref", "department", "x", "y"});
  std::map<std::string, Gazetteer> out;
  CsvRow row;
  while (in.next(row)) {
    const std::string ref = in.text(row, 0);
    const std::string dept = in.text(row, 1);
    auto g = grids.find(dept);
    if (g == grids.end()) in.fail(row, "unknown department " + dept);
    Cell c;
    try {
      c = g->second.snap(in.number(row, 2), in.number(row, 3));
    } catch (const ValidationError& e) {
      in.fail(row, e.what());
    }
    if (!out[dept].emplace(ref, c).second) in.fail(row, "duplicate location_ref " + ref);
  }
  return out;
}

}  // namespace firerisk
