#pragma once

#include <filesystem>

#include "firerisk/cube.hpp"

namespace firerisk {

/// Writes `<dir>/meta.json` and `<dir>/values.bin` (little-endian float32,
/// [time][y][x][feature]). The header records dims, feature names, ISO dates,
/// the grid and an FNV-1a checksum of the payload.
void store_cube(const DataCube& cube, const std::filesystem::path& dir);

/// Inverse of store_cube; bit-exact. Throws IntegrityError on a corrupt
/// header, a payload of the wrong length or a checksum mismatch.
DataCube load_cube(const std::filesystem::path& dir);

}  // namespace firerisk
