#include "efm/sliced_distance.hpp"

#include "efm/errors.hpp"
#include "efm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace efm {

namespace {

// Relative range below which a slice is treated as constant (dry cells).
constexpr double kDegenerateSliceRatio = 1e-8;

bool slice_is_degenerate(const std::vector<double>& y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    return (*hi - *lo) < kDegenerateSliceRatio * std::max(scale, 1e-300);
}

std::size_t common_grid_n(const Field& f, const Field& g, const DpConfig& dpcfg) {
    if (dpcfg.grid_n != 0) return dpcfg.grid_n;
    return std::max(f.ntime(), g.ntime());
}

struct SliceAlignment {
    AlignmentResult result;
    bool degenerate = false;
};

// Align each pair of slices on a common grid. Degenerate (near-constant)
// slices skip the DP and get the identity warp with zero phase distance.
std::vector<SliceAlignment> align_slices(const SliceSet& fs, const SliceSet& gs,
                                         std::size_t n, const DpConfig& dpcfg,
                                         std::size_t threads) {
    std::vector<SliceAlignment> out(fs.size());
    DpConfig cfg = dpcfg;
    cfg.grid_n = 0; // slices are resampled explicitly below
    parallel_for(fs.size(), threads, [&](std::size_t s) {
        const Func1D fsc = resample(fs.curves[s], n);
        const Func1D gsc = resample(gs.curves[s], n);
        SliceAlignment& sa = out[s];
        if (slice_is_degenerate(fsc.y) || slice_is_degenerate(gsc.y)) {
            sa.degenerate = true;
            sa.result.gamma_g = WarpingFunction::identity(n);
            sa.result.aligned_g = gsc;
            sa.result.d_amplitude =
                l2_distance(to_srvf(fsc).q, to_srvf(gsc).q);
            sa.result.d_phase = 0.0;
            sa.result.d_translation = std::abs(fsc.y.front() - gsc.y.front());
            sa.result.degenerate = true;
        } else {
            sa.result = align(fsc, gsc, cfg);
            sa.degenerate = sa.result.degenerate;
        }
    });
    return out;
}

} // namespace

double wendland(double d_km, double r_km) {
    if (r_km <= 0.0) throw ValidationError("wendland: range must be positive");
    if (r_km > GeoConstants::earth_diameter_km)
        throw RangeTooLarge("wendland: range exceeds Earth diameter");
    if (d_km < 0.0) throw ValidationError("wendland: distance must be >= 0");
    if (d_km > r_km) return 0.0;
    const double u = d_km / r_km;
    const double one_minus = 1.0 - u;
    const double p6 = one_minus * one_minus * one_minus * one_minus * one_minus *
                      one_minus;
    return p6 * (35.0 * u * u + 18.0 * u + 3.0) / 3.0;
}

SliceSet slice_field(const Field& field, const SliceLocationSet& centers,
                     const KernelConfig& kcfg, std::size_t threads) {
    const auto area = cell_area_weights(field.grid());
    const std::size_t ntime = field.ntime();
    const std::size_t ncell = field.grid().size();

    SliceSet out;
    out.locations = centers;
    out.curves.resize(centers.size());

    parallel_for(centers.size(), threads, [&](std::size_t s) {
        const auto nbrs = neighbors_within(field.grid(), centers.locations[s],
                                           kcfg.range_km);
        std::vector<std::size_t> cells;
        std::vector<double> w;
        double total = 0.0;
        for (const GridNeighbor& nb : nbrs) {
            const double k = wendland(nb.distance_km, kcfg.range_km);
            if (k <= 0.0) continue;
            const std::size_t c = field.grid().flat_index(nb.ilat, nb.ilon);
            cells.push_back(c);
            w.push_back(k * area[c]);
            total += w.back();
        }
        if (cells.empty() || total <= 0.0)
            throw EmptyKernelSupport(
                "slice_field: kernel support contains no grid cell at (" +
                std::to_string(centers.locations[s].lat) + ", " +
                std::to_string(centers.locations[s].lon) + ")");

        std::vector<double> curve(ntime, 0.0);
        for (std::size_t idx = 0; idx < cells.size(); ++idx) {
            const double wi = w[idx];
            const double* col = field.values().data() + cells[idx];
            for (std::size_t k = 0; k < ntime; ++k)
                curve[k] += wi * col[k * ncell];
        }
        if (kcfg.normalize) {
            const double inv = 1.0 / total;
            for (double& v : curve) v *= inv;
        }
        out.curves[s].y = std::move(curve);
    });
    return out;
}

double weighted_rms(const std::vector<double>& values,
                    const std::vector<double>& weights) {
    // Fixed-order Kahan summation keeps the reduction bit-stable.
    double num = 0.0, cnum = 0.0, den = 0.0, cden = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        {
            const double term = weights[i] * values[i] * values[i] - cnum;
            const double t = num + term;
            cnum = (t - num) - term;
            num = t;
        }
        {
            const double term = weights[i] - cden;
            const double t = den + term;
            cden = (t - den) - term;
            den = t;
        }
    }
    if (den <= 0.0) throw ValidationError("weighted_rms: total weight must be > 0");
    return std::sqrt(num / den);
}

SlicedDistanceResult sliced_elastic_distance(const Field& f, const Field& g,
                                             const SliceLocationSet& centers,
                                             const KernelConfig& kcfg,
                                             const DpConfig& dpcfg,
                                             std::size_t threads) {
    const SliceSet fs = slice_field(f, centers, kcfg, threads);
    const SliceSet gs = slice_field(g, centers, kcfg, threads);
    const std::size_t n = common_grid_n(f, g, dpcfg);
    const auto aligned = align_slices(fs, gs, n, dpcfg, threads);

    SlicedDistanceResult out;
    out.local.locations = centers;
    out.local.d_amplitude.resize(centers.size());
    out.local.d_phase.resize(centers.size());
    out.local.d_translation.resize(centers.size());
    out.local.degenerate.resize(centers.size());
    for (std::size_t s = 0; s < centers.size(); ++s) {
        out.local.d_amplitude[s] = aligned[s].result.d_amplitude;
        out.local.d_phase[s] = aligned[s].result.d_phase;
        out.local.d_translation[s] = aligned[s].result.d_translation;
        out.local.degenerate[s] = aligned[s].degenerate ? 1 : 0;
    }
    out.distance.d_sa = weighted_rms(out.local.d_amplitude, centers.weights);
    out.distance.d_sp = weighted_rms(out.local.d_phase, centers.weights);
    out.distance.d_st = weighted_rms(out.local.d_translation, centers.weights);
    return out;
}

TimingBiasMap timing_bias_map(const Field& f, const Field& g,
                              const SliceLocationSet& centers,
                              const KernelConfig& kcfg, const DpConfig& dpcfg,
                              const std::vector<double>& event_times,
                              std::size_t threads) {
    if (event_times.size() != 1 && event_times.size() != centers.size())
        throw ValidationError(
            "timing_bias_map: need one event time, or one per location");
    for (double t : event_times)
        if (t < 0.0 || t > 1.0)
            throw ValidationError("timing_bias_map: event times must be in [0, 1]");

    const SliceSet fs = slice_field(f, centers, kcfg, threads);
    const SliceSet gs = slice_field(g, centers, kcfg, threads);
    const std::size_t n = common_grid_n(f, g, dpcfg);
    const auto aligned = align_slices(fs, gs, n, dpcfg, threads);

    TimingBiasMap out;
    out.locations = centers;
    out.bias_days.resize(centers.size());
    out.degenerate.resize(centers.size());
    out.event_time = event_times.front();
    for (std::size_t s = 0; s < centers.size(); ++s) {
        const double t = event_times.size() == 1 ? event_times[0] : event_times[s];
        out.bias_days[s] =
            bias_to_days(timing_bias(aligned[s].result, t), f.days_per_unit());
        out.degenerate[s] = aligned[s].degenerate ? 1 : 0;
    }
    return out;
}

} // namespace efm
