#pragma once

#include "efm/sliced_distance.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace efm {

struct LatLonBox {
    double lat_min, lat_max;
    double lon_min, lon_max;

    bool contains(const LatLon& p) const;
    /// Monsoon Core Region: 15N-30N, 68E-88E.
    static LatLonBox monsoon_core_region() { return {15.0, 30.0, 68.0, 88.0}; }
};

struct EventConfig {
    double threshold_fraction = 0.5; // of the per-curve maximum
    LatLonBox region = LatLonBox::monsoon_core_region();
};

// Onset = first strict exceedance of threshold*max, retreat = last.
// Day-of-year values on the 365-day calendar; undefined events are flagged.
struct EventDateMap {
    SliceLocationSet locations;
    std::vector<int> onset_day;
    std::vector<int> retreat_day;
    std::vector<char> undefined;
    std::vector<double> onset_time;   // normalized
    std::vector<double> retreat_time; // normalized
};

EventDateMap detect_events(const SliceSet& slices, const EventConfig& cfg,
                           double days_per_unit = 365.0);

struct EventBiasResult {
    EventDateMap reference_dates;
    TimingBiasMap onset_bias;
    TimingBiasMap retreat_bias;
};

/// Onset/retreat timing biases of g relative to f: events are detected on
/// the reference f's slices restricted to the region, then the warp-based
/// bias is evaluated at each event time.
EventBiasResult event_timing_bias(const Field& f, const Field& g,
                                  const EventConfig& cfg,
                                  const KernelConfig& kcfg,
                                  const DpConfig& dpcfg = {},
                                  std::size_t threads = 1);

/// Restrict slice centers to a bounding box.
SliceLocationSet restrict_to_region(const SliceLocationSet& centers,
                                    const LatLonBox& region);

} // namespace efm
