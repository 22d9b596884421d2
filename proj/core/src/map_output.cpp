#include "efm/map_output.hpp"

#include "efm/errors.hpp"
#include "efm/png_writer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace efm {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path.string());
    return os;
}

} // namespace

void write_local_distance_csv(const LocalDistanceMap& map,
                              const std::filesystem::path& path) {
    auto os = open_csv(path);
    os << "lat,lon,d_amplitude,d_phase,d_translation,flag\n";
    char buf[256];
    for (std::size_t s = 0; s < map.locations.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      map.locations.locations[s].lat,
                      map.locations.locations[s].lon, map.d_amplitude[s],
                      map.d_phase[s], map.d_translation[s],
                      static_cast<int>(map.degenerate[s]));
        os << buf;
    }
}

void write_timing_bias_csv(const TimingBiasMap& map,
                           const std::filesystem::path& path) {
    auto os = open_csv(path);
    os << "lat,lon,bias_days,flag\n";
    char buf[256];
    for (std::size_t s = 0; s < map.locations.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n",
                      map.locations.locations[s].lat,
                      map.locations.locations[s].lon, map.bias_days[s],
                      static_cast<int>(map.degenerate[s]));
        os << buf;
    }
}

void write_event_csv(const EventDateMap& dates, const TimingBiasMap& onset,
                     const TimingBiasMap& retreat,
                     const std::filesystem::path& path) {
    auto os = open_csv(path);
    os << "lat,lon,onset_day,retreat_day,onset_bias_days,retreat_bias_days,flag\n";
    char buf[320];
    for (std::size_t s = 0; s < dates.locations.size(); ++s) {
        const int flag = dates.undefined[s] || onset.degenerate[s] ||
                         retreat.degenerate[s];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%d,%.17g,%.17g,%d\n",
                      dates.locations.locations[s].lat,
                      dates.locations.locations[s].lon, dates.onset_day[s],
                      dates.retreat_day[s], onset.bias_days[s],
                      retreat.bias_days[s], flag);
        os << buf;
    }
}

void write_map_png(const SliceLocationSet& locations,
                   const std::vector<double>& values,
                   const std::filesystem::path& path, bool diverging,
                   std::size_t pixels_per_cell) {
    // Recover the lat/lon axes from the distinct coordinates.
    std::map<double, std::size_t> lats, lons;
    for (const LatLon& p : locations.locations) {
        lats.emplace(p.lat, 0);
        lons.emplace(p.lon, 0);
    }
    std::size_t idx = 0;
    for (auto& kv : lats) kv.second = idx++;
    idx = 0;
    for (auto& kv : lons) kv.second = idx++;

    const std::size_t nlat = lats.size(), nlon = lons.size();
    const std::size_t w = nlon * pixels_per_cell, h = nlat * pixels_per_cell;

    double lo = 0.0, hi = 0.0;
    if (!values.empty()) {
        lo = *std::min_element(values.begin(), values.end());
        hi = *std::max_element(values.begin(), values.end());
    }
    const double absmax = std::max(std::abs(lo), std::abs(hi));

    std::vector<std::uint8_t> rgb(w * h * 3, 200); // grey = missing
    for (std::size_t s = 0; s < locations.locations.size(); ++s) {
        const std::size_t i = lats[locations.locations[s].lat];
        const std::size_t j = lons[locations.locations[s].lon];
        Rgb c{};
        if (diverging) {
            c = diverging_color(absmax > 0.0 ? values[s] / absmax : 0.0);
        } else {
            c = sequential_color(hi > lo ? (values[s] - lo) / (hi - lo) : 0.0);
        }
        // North at the top.
        const std::size_t row0 = (nlat - 1 - i) * pixels_per_cell;
        const std::size_t col0 = j * pixels_per_cell;
        for (std::size_t dy = 0; dy < pixels_per_cell; ++dy) {
            for (std::size_t dx = 0; dx < pixels_per_cell; ++dx) {
                const std::size_t off = ((row0 + dy) * w + col0 + dx) * 3;
                rgb[off] = c.r;
                rgb[off + 1] = c.g;
                rgb[off + 2] = c.b;
            }
        }
    }
    write_png_rgb(path, w, h, rgb);
}

} // namespace efm
