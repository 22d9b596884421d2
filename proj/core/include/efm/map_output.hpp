#pragma once

#include "efm/event_timing.hpp"
#include "efm/sliced_distance.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace efm {

// CSV and PNG emission for per-location maps. CSV rows are ordered by
// location index; PNG rasterization is nearest-neighbor with one pixel
// block per distinct (lat, lon).

void write_local_distance_csv(const LocalDistanceMap& map,
                              const std::filesystem::path& path);
void write_timing_bias_csv(const TimingBiasMap& map,
                           const std::filesystem::path& path);
void write_event_csv(const EventDateMap& dates, const TimingBiasMap& onset,
                     const TimingBiasMap& retreat,
                     const std::filesystem::path& path);

/// One scalar per location, sequential colormap scaled to [min, max].
void write_map_png(const SliceLocationSet& locations,
                   const std::vector<double>& values,
                   const std::filesystem::path& path, bool diverging,
                   std::size_t pixels_per_cell = 4);

} // namespace efm
