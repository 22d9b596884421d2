#include "efm/event_timing.hpp"

#include "efm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace efm {

bool LatLonBox::contains(const LatLon& p) const {
    if (p.lat < lat_min || p.lat > lat_max) return false;
    // Compare longitudes mod 360 against the box window.
    double lon = p.lon;
    while (lon < lon_min) lon += 360.0;
    while (lon >= lon_min + 360.0) lon -= 360.0;
    return lon <= lon_max;
}

SliceLocationSet restrict_to_region(const SliceLocationSet& centers,
                                    const LatLonBox& region) {
    SliceLocationSet out;
    for (std::size_t s = 0; s < centers.size(); ++s) {
        if (region.contains(centers.locations[s])) {
            out.locations.push_back(centers.locations[s]);
            out.weights.push_back(centers.weights[s]);
        }
    }
    if (out.locations.empty())
        throw ValidationError("restrict_to_region: no slice centers in region");
    return out;
}

EventDateMap detect_events(const SliceSet& slices, const EventConfig& cfg,
                           double days_per_unit) {
    if (cfg.threshold_fraction <= 0.0 || cfg.threshold_fraction >= 1.0)
        throw ValidationError("detect_events: threshold_fraction must be in (0, 1)");

    EventDateMap out;
    out.locations = slices.locations;
    const std::size_t ns = slices.size();
    out.onset_day.assign(ns, 0);
    out.retreat_day.assign(ns, 0);
    out.undefined.assign(ns, 0);
    out.onset_time.assign(ns, 0.0);
    out.retreat_time.assign(ns, 0.0);

    for (std::size_t s = 0; s < ns; ++s) {
        const auto& y = slices.curves[s].y;
        const std::size_t n = y.size();
        const double ymax = *std::max_element(y.begin(), y.end());
        const double ymin = *std::min_element(y.begin(), y.end());
        if (ymax <= 0.0 || ymax == ymin) {
            out.undefined[s] = 1;
            continue;
        }
        const double thr = cfg.threshold_fraction * ymax;
        std::size_t first = n, last = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (y[k] > thr) {
                if (first == n) first = k;
                last = k;
            }
        }
        if (first == n) {
            out.undefined[s] = 1;
            continue;
        }
        out.onset_time[s] = static_cast<double>(first) / static_cast<double>(n - 1);
        out.retreat_time[s] = static_cast<double>(last) / static_cast<double>(n - 1);
        out.onset_day[s] =
            1 + static_cast<int>(std::lround(out.onset_time[s] * (days_per_unit - 1.0)));
        out.retreat_day[s] =
            1 + static_cast<int>(std::lround(out.retreat_time[s] * (days_per_unit - 1.0)));
    }
    return out;
}

EventBiasResult event_timing_bias(const Field& f, const Field& g,
                                  const EventConfig& cfg,
                                  const KernelConfig& kcfg,
                                  const DpConfig& dpcfg, std::size_t threads) {
    const SliceLocationSet all =
        SliceLocationSet::from_grid(f.grid());
    const SliceLocationSet centers = restrict_to_region(all, cfg.region);

    const SliceSet ref_slices = slice_field(f, centers, kcfg, threads);
    EventBiasResult out;
    out.reference_dates = detect_events(ref_slices, cfg, f.days_per_unit());

    out.onset_bias = timing_bias_map(f, g, centers, kcfg, dpcfg,
                                     out.reference_dates.onset_time, threads);
    out.retreat_bias = timing_bias_map(f, g, centers, kcfg, dpcfg,
                                       out.reference_dates.retreat_time, threads);

    // Undefined reference events invalidate the bias at that location.
    for (std::size_t s = 0; s < centers.size(); ++s) {
        if (out.reference_dates.undefined[s]) {
            out.onset_bias.degenerate[s] = 1;
            out.retreat_bias.degenerate[s] = 1;
            out.onset_bias.bias_days[s] = 0.0;
            out.retreat_bias.bias_days[s] = 0.0;
        }
    }
    return out;
}

} // namespace efm
