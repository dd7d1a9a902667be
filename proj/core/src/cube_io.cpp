#include "firerisk/cube_io.hpp"

#include <bit>
#include <fstream>
#include <nlohmann/json.hpp>

#include "firerisk/error.hpp"
#include "firerisk/hash.hpp"

namespace firerisk {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "firerisk-cube";
constexpr int kVersion = 1;

std::vector<unsigned char> encode_le(std::span<const float> values) {
  std::vector<unsigned char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(values[i]);
    bytes[4 * i + 0] = static_cast<unsigned char>(u & 0xFF);
    bytes[4 * i + 1] = static_cast<unsigned char>((u >> 8) & 0xFF);
    bytes[4 * i + 2] = static_cast<unsigned char>((u >> 16) & 0xFF);
    bytes[4 * i + 3] = static_cast<unsigned char>((u >> 24) & 0xFF);
  }
  return bytes;
}

std::string checksum(const std::vector<unsigned char>& bytes) {
  Fnv1a64 h;
  h.update(std::as_bytes(std::span(bytes)));
  return h.hex();
}

}  // namespace

void store_cube(const DataCube& cube, const fs::path& dir) {
  fs::create_directories(dir);
  const auto payload = encode_le(cube.values());

  ordered_json meta;
  meta["format"] = kFormat;
  meta["version"] = kVersion;
  meta["department"] = cube.department_id();
  const auto& g = cube.grid();
  meta["grid"] = {{"origin_x", g.origin_x}, {"origin_y", g.origin_y}, {"cell_size_m", g.cell_size_m},
                  {"n_x", g.n_x},           {"n_y", g.n_y}};
  meta["dims"] = {{"time", cube.n_time()}, {"y", cube.n_y()}, {"x", cube.n_x()}, {"feature", cube.n_features()}};
  meta["order"] = "time,y,x,feature";
  meta["dtype"] = "float32le";
  meta["feature_names"] = cube.feature_names();
  auto dates = ordered_json::array();
  for (Date d : cube.dates()) dates.push_back(d.iso());
  meta["dates"] = std::move(dates);
  meta["payload_bytes"] = payload.size();
  meta["payload_fnv1a64"] = checksum(payload);

  {
    std::ofstream out(dir / "values.bin", std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) throw Error("failed writing " + (dir / "values.bin").string());
  }
  std::ofstream out(dir / "meta.json", std::ios::binary | std::ios::trunc);
  out << meta.dump(2) << '\n';
  if (!out) throw Error("failed writing " + (dir / "meta.json").string());
}

DataCube load_cube(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const fs::path bin_path = dir / "values.bin";
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (!meta_in) throw IntegrityError("missing cube header " + meta_path.string());

  GridSpec grid;
  std::vector<Date> dates;
  std::vector<std::string> names;
  std::string department;
  std::size_t nt = 0, ny = 0, nx = 0, nf = 0, payload_bytes = 0;
  std::string expected_sum;
  try {
    const auto meta = nlohmann::json::parse(meta_in);
    if (meta.at("format").get<std::string>() != kFormat || meta.at("version").get<int>() != kVersion) {
      throw IntegrityError("unsupported cube format in " + meta_path.string());
    }
    if (meta.at("dtype").get<std::string>() != "float32le" || meta.at("order").get<std::string>() != "time,y,x,feature") {
      throw IntegrityError("unsupported cube layout in " + meta_path.string());
    }
    department = meta.at("department").get<std::string>();
    const auto& g = meta.at("grid");
    grid.department_id = department;
    grid.origin_x = g.at("origin_x").get<double>();
    grid.origin_y = g.at("origin_y").get<double>();
    grid.cell_size_m = g.at("cell_size_m").get<double>();
    grid.n_x = g.at("n_x").get<int>();
    grid.n_y = g.at("n_y").get<int>();
    const auto& dims = meta.at("dims");
    nt = dims.at("time").get<std::size_t>();
    ny = dims.at("y").get<std::size_t>();
    nx = dims.at("x").get<std::size_t>();
    nf = dims.at("feature").get<std::size_t>();
    names = meta.at("feature_names").get<std::vector<std::string>>();
    for (const auto& s : meta.at("dates")) dates.push_back(Date::parse(s.get<std::string>()));
    payload_bytes = meta.at("payload_bytes").get<std::size_t>();
    expected_sum = meta.at("payload_fnv1a64").get<std::string>();
  } catch (const IntegrityError&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegrityError("corrupted cube header " + meta_path.string() + ": " + e.what());
  }

  if (ny != static_cast<std::size_t>(grid.n_y) || nx != static_cast<std::size_t>(grid.n_x) || nt != dates.size() ||
      nf != names.size() || payload_bytes != nt * ny * nx * nf * 4) {
    throw IntegrityError("cube header dims are inconsistent in " + meta_path.string());
  }

  std::error_code ec;
  const auto size = fs::file_size(bin_path, ec);
  if (ec) throw IntegrityError("missing cube payload " + bin_path.string());
  if (size != payload_bytes) {
    throw IntegrityError("cube payload " + bin_path.string() + " has " + std::to_string(size) + " bytes, header says " +
                         std::to_string(payload_bytes));
  }
  std::vector<unsigned char> bytes(payload_bytes);
  std::ifstream bin(bin_path, std::ios::binary);
  bin.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!bin) throw IntegrityError("short read on " + bin_path.string());
  if (checksum(bytes) != expected_sum) throw IntegrityError("cube payload checksum mismatch in " + bin_path.string());

  std::vector<float> values(payload_bytes / 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) | (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                            (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    values[i] = std::bit_cast<float>(u);
  }
  try {
    return DataCube(department, grid, std::move(dates), std::move(names), std::move(values));
  } catch (const Error& e) {
    throw IntegrityError("stored cube " + dir.string() + " violates cube invariants: " + e.what());
  }
}

}  // namespace firerisk
