#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace firerisk {

/// Row/column address of a raster cell. Row 0 is the northern edge.
struct Cell {
  int row = 0;
  int col = 0;

  auto operator<=>(const Cell&) const = default;
};

/// Department raster definition on a projected CRS. The origin is the
/// upper-left corner of cell (0, 0); rows grow southward.
struct GridSpec {
  static constexpr double kCellSizeM = 2000.0;

  std::string department_id;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size_m = kCellSizeM;
  int n_x = 1;
  int n_y = 1;

  /// Throws ValidationError unless cell_size_m == 2000 and n_x, n_y >= 1.
  void validate() const;

  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_y); }
  std::size_t flat(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(n_x) + static_cast<std::size_t>(c.col);
  }
  bool contains(Cell c) const noexcept { return c.row >= 0 && c.row < n_y && c.col >= 0 && c.col < n_x; }

  double center_x(int col) const noexcept { return origin_x + (col + 0.5) * cell_size_m; }
  double center_y(int row) const noexcept { return origin_y - (row + 0.5) * cell_size_m; }

  /// Cell whose center is nearest to the projected point. Throws when the
  /// point falls outside the grid extent.
  Cell snap(double x, double y) const;

  bool operator==(const GridSpec&) const = default;
};

/// Weather arrives on an 11 x 11 lattice spanning the department extent.
inline constexpr int kWeatherLatticeSize = 11;

/// Nearest weather lattice point for a raster cell.
Cell nearest_weather_point(const GridSpec& grid, Cell cell);

/// location_ref -> raster cell, one department.
using Gazetteer = std::map<std::string, Cell>;

/// Reads `department,origin_x,origin_y,cell_size_m,n_x,n_y`.
std::map<std::string, GridSpec> read_grids_csv(const std::filesystem::path& path);
void write_grids_csv(const std::map<std::string, GridSpec>& grids, const std::filesystem::path& path);

/// Reads `location_ref,department,x,y` and snaps each point to its
/// department grid. Returns department -> gazetteer.
std::map<std::string, Gazetteer> read_gazetteer_csv(const std::filesystem::path& path,
                                                    const std::map<std::string, GridSpec>& grids);

}  // namespace firerisk
