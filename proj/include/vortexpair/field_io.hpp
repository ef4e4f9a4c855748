#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vortexpair/grid.hpp"

namespace vp {

/// Field dump: `<stem>.json` carries {nx, ny, L, H, h, kind, x1_min, x2_min}
/// plus any caller metadata, `<stem>.bin` holds nx*ny little-endian float64
/// values in row-major order.
void write_field_dump(const ScalarField& f, const std::filesystem::path& stem,
                      const nlohmann::json& metadata = nlohmann::json::object());

struct FieldDump {
  ScalarField field;
  nlohmann::json header;
};

FieldDump read_field_dump(const std::filesystem::path& stem);

/// One line per cell: x1,x2,value.
void write_field_csv(const ScalarField& f, const std::filesystem::path& path);

/// Formats a double so that parsing it back yields the same bits.
std::string format_double(double v);

}  // namespace vp
