#pragma once

#include "efm/alignment.hpp"
#include "efm/field.hpp"
#include "efm/srvf.hpp"

#include <cstddef>
#include <vector>

namespace efm {

struct KernelConfig {
    double range_km = 750.0;
    bool normalize = true; // slice = kernel-weighted local mean
};

/// Wendland kernel of Eq.-style form
/// (1 - d/r)^6 (35 d^2/r^2 + 18 d/r + 3) / 3 for d <= r, else 0.
double wendland(double d_km, double r_km);

// Slice curves, one per center location, all on the field's time grid.
struct SliceSet {
    SliceLocationSet locations;
    std::vector<Func1D> curves;

    std::size_t size() const { return curves.size(); }
};

/// Kernel convolution of the field against every center: slice value at
/// (s, t) is the area-weighted Wendland-kernel sum over grid cells within
/// range (divided by the total kernel mass when normalize is set).
SliceSet slice_field(const Field& field, const SliceLocationSet& centers,
                     const KernelConfig& kcfg, std::size_t threads = 1);

struct SlicedElasticDistance {
    double d_sa = 0.0;
    double d_sp = 0.0;
    double d_st = 0.0;
};

struct LocalDistanceMap {
    SliceLocationSet locations;
    std::vector<double> d_amplitude;
    std::vector<double> d_phase;
    std::vector<double> d_translation;
    std::vector<char> degenerate;
};

struct TimingBiasMap {
    SliceLocationSet locations;
    std::vector<double> bias_days;
    std::vector<char> degenerate;
    double event_time = 0.0; // normalized; per-location times may override
};

struct SlicedDistanceResult {
    SlicedElasticDistance distance;
    LocalDistanceMap local;
};

/// Per-slice elastic distances aggregated as the cosine-latitude weighted
/// root mean square (fixed-order compensated summation, independent of the
/// thread count).
SlicedDistanceResult sliced_elastic_distance(const Field& f, const Field& g,
                                             const SliceLocationSet& centers,
                                             const KernelConfig& kcfg,
                                             const DpConfig& dpcfg = {},
                                             std::size_t threads = 1);

/// Timing bias per slice location at the given normalized event times
/// (one per location, or a single time broadcast to all), in days.
TimingBiasMap timing_bias_map(const Field& f, const Field& g,
                              const SliceLocationSet& centers,
                              const KernelConfig& kcfg, const DpConfig& dpcfg,
                              const std::vector<double>& event_times,
                              std::size_t threads = 1);

/// Weighted RMS used by the aggregation; exposed for reuse.
double weighted_rms(const std::vector<double>& values,
                    const std::vector<double>& weights);

} // namespace efm
