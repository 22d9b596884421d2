#include "efm/field_io.hpp"

#include "efm/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace efm {

namespace {

constexpr char kMagic[6] = {'F', 'G', 'R', 'I', 'D', '1'};

static_assert(sizeof(double) == 8, "FGRID1 requires 64-bit doubles");

// On-disk layout is little-endian; this code assumes a little-endian host.
void write_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

} // namespace

void write_field(const Field& field, const std::filesystem::path& path) {
    nlohmann::json header;
    header["dims"] = {field.ntime(), field.grid().nlat(), field.grid().nlon()};
    header["lats"] = field.grid().lats();
    header["lons"] = field.grid().lons();
    header["name"] = field.name();
    header["units"] = field.units();
    header["calendar"] = "noleap";
    header["days_per_unit"] = field.days_per_unit();
    const std::string hs = header.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("write_field: cannot open " + path.string());
    os.write(kMagic, sizeof(kMagic));
    write_u64_le(os, hs.size());
    os.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    os.write(reinterpret_cast<const char*>(field.values().data()),
             static_cast<std::streamsize>(field.values().size() * sizeof(double)));
    if (!os) throw ValidationError("write_field: write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("read_field: cannot open " + path.string());

    char magic[6];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw MagicMismatch("read_field: not an FGRID1 file: " + path.string());

    const std::uint64_t hlen = read_u64_le(is);
    std::string hs(hlen, '\0');
    is.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!is) throw ParseError("read_field: truncated header in " + path.string());

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hs);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("read_field: bad JSON header: ") + e.what());
    }

    const auto dims = header.at("dims").get<std::vector<std::uint64_t>>();
    if (dims.size() != 3) throw DimMismatch("read_field: dims must have rank 3");
    auto lats = header.at("lats").get<std::vector<double>>();
    auto lons = header.at("lons").get<std::vector<double>>();
    if (lats.size() != dims[1] || lons.size() != dims[2])
        throw DimMismatch("read_field: coordinate arrays do not match dims");

    const std::size_t count = dims[0] * dims[1] * dims[2];
    std::vector<double> values(count);
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
        throw DimMismatch("read_field: payload shorter than header dims in " +
                          path.string());
    if (is.peek() != std::ifstream::traits_type::eof())
        throw DimMismatch("read_field: payload longer than header dims in " +
                          path.string());

    return Field(SpatialGrid(std::move(lats), std::move(lons)), dims[0],
                 std::move(values), header.value("name", ""),
                 header.value("units", "mm/day"),
                 header.value("days_per_unit", 365.0));
}

void write_field_csv(const Field& field, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("write_field_csv: cannot open " + path.string());
    os << "time,lat,lon,value\n";
    char buf[512];
    for (std::size_t k = 0; k < field.ntime(); ++k) {
        for (std::size_t i = 0; i < field.grid().nlat(); ++i) {
            for (std::size_t j = 0; j < field.grid().nlon(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                              field.time_at(k), field.grid().lats()[i],
                              field.grid().lons()[j], field.at(k, i, j));
                os << buf;
            }
        }
    }
}

Field read_field_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("read_field_csv: cannot open " + path.string());

    std::string line;
    if (!std::getline(is, line) || line != "time,lat,lon,value")
        throw ParseError("read_field_csv: missing 'time,lat,lon,value' header at line 1");

    struct Row {
        double t, lat, lon, v;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        Row r;
        char extra;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &r.t, &r.lat, &r.lon,
                        &r.v, &extra) != 4)
            throw ParseError("read_field_csv: malformed row at line " +
                             std::to_string(lineno));
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError("read_field_csv: no data rows");

    // Reconstruct the axes from the distinct coordinate values.
    std::map<double, std::size_t> tset, latset, lonset;
    for (const Row& r : rows) {
        tset.emplace(r.t, 0);
        latset.emplace(r.lat, 0);
        lonset.emplace(r.lon, 0);
    }
    std::size_t idx = 0;
    for (auto& kv : tset) kv.second = idx++;
    idx = 0;
    for (auto& kv : latset) kv.second = idx++;
    idx = 0;
    for (auto& kv : lonset) kv.second = idx++;

    std::vector<double> lats, lons;
    for (const auto& kv : latset) lats.push_back(kv.first);
    for (const auto& kv : lonset) lons.push_back(kv.first);
    const std::size_t ntime = tset.size();
    const std::size_t expected = ntime * lats.size() * lons.size();
    if (rows.size() != expected)
        throw DimMismatch("read_field_csv: " + std::to_string(rows.size()) +
                          " rows but axes imply " + std::to_string(expected));

    std::vector<double> values(expected, std::nan(""));
    const std::size_t nlat = lats.size(), nlon = lons.size();
    for (const Row& r : rows) {
        const std::size_t k = tset[r.t], i = latset[r.lat], j = lonset[r.lon];
        values[(k * nlat + i) * nlon + j] = r.v;
    }
    return Field(SpatialGrid(std::move(lats), std::move(lons)), ntime,
                 std::move(values));
}

} // namespace efm
