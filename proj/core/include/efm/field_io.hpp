#pragma once

#include "efm/field.hpp"

#include <filesystem>

namespace efm {

// FGRID1 container: 6-byte magic "FGRID1", 8-byte little-endian header
// length, UTF-8 JSON header (dims, coords, units, calendar, name), then
// ntime*nlat*nlon little-endian float64, row-major [time][lat][lon].

Field read_field(const std::filesystem::path& path);
void write_field(const Field& field, const std::filesystem::path& path);

// CSV interchange: header row "time,lat,lon,value", "%.17g" formatting,
// rows ordered (time, lat, lon).
Field read_field_csv(const std::filesystem::path& path);
void write_field_csv(const Field& field, const std::filesystem::path& path);

} // namespace efm
