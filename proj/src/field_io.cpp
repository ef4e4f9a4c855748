#include "vortexpair/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace vp {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  }
  return v;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
  return std::filesystem::path(stem.string() + ext);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_field_dump(const ScalarField& f, const std::filesystem::path& stem, const nlohmann::json& metadata) {
  const Grid& g = f.grid();
  nlohmann::json header = metadata;
  header["nx"] = g.nx();
  header["ny"] = g.ny();
  header["L"] = g.half_width();
  header["H"] = g.height();
  header["h"] = g.h();
  header["x1_min"] = g.lower_left().x1;
  header["x2_min"] = g.lower_left().x2;
  header["half_plane"] = g.is_half_plane();
  header["kind"] = to_string(f.kind());

  std::ofstream js(with_suffix(stem, ".json"), std::ios::binary | std::ios::trunc);
  if (!js) throw Error("cannot write " + with_suffix(stem, ".json").string());
  js << header.dump(2) << '\n';

  std::ofstream bin(with_suffix(stem, ".bin"), std::ios::binary | std::ios::trunc);
  if (!bin) throw Error("cannot write " + with_suffix(stem, ".bin").string());
  for (double v : f.values()) {
    const std::uint64_t raw = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &raw, 8);
    bin.write(bytes, 8);
  }
  if (!bin) throw Error("short write on " + with_suffix(stem, ".bin").string());
}

FieldDump read_field_dump(const std::filesystem::path& stem) {
  std::ifstream js(with_suffix(stem, ".json"));
  if (!js) throw Error("cannot read " + with_suffix(stem, ".json").string());
  nlohmann::json header = nlohmann::json::parse(js);

  const int nx = header.at("nx").get<int>();
  const int ny = header.at("ny").get<int>();
  const double h = header.at("h").get<double>();
  const bool half = header.value("half_plane", true);
  const Grid g = half ? Grid::half_plane_spacing(h, nx, ny)
                      : Grid::with_origin(h, nx, ny, {header.at("x1_min").get<double>(), header.at("x2_min").get<double>()});

  std::ifstream bin(with_suffix(stem, ".bin"), std::ios::binary);
  if (!bin) throw Error("cannot read " + with_suffix(stem, ".bin").string());
  std::vector<double> values(g.size());
  for (double& v : values) {
    char bytes[8];
    if (!bin.read(bytes, 8)) throw Error("truncated field dump " + with_suffix(stem, ".bin").string());
    std::uint64_t raw;
    std::memcpy(&raw, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(raw));
  }
  const FieldKind kind = field_kind_from_string(header.at("kind").get<std::string>());
  return {ScalarField(g, std::move(values), kind), std::move(header)};
}

void write_field_csv(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "x1,x2,value\n";
  const Grid& g = f.grid();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Point c = g.center(k);
    out << format_double(c.x1) << ',' << format_double(c.x2) << ',' << format_double(f[k]) << '\n';
  }
}

}  // namespace vp
