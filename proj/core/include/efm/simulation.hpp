#pragma once

#include "efm/field.hpp"
#include "efm/sliced_distance.hpp"

#include <cstdint>
#include <vector>

namespace efm {

// Latitude-driven amplitude/phase modification: g(s,t) = a(s) * f(s, t^p(s)).
// Amplitude multipliers rise linearly from 1.1 at the South Pole to
// {1.15, 1.2, 1.25}; phase exponents are base^(lat/90) with base in
// {1.2, 1.4, 1.6}.
struct ModificationField {
    int amp_index = 0;   // 0 = none, 1..3 = modification level
    int phase_index = 0; // 0 = none, 1..3 = modification level

    double amplitude_at(double lat_deg) const;
    double phase_exponent_at(double lat_deg) const;
};

Field apply_modification(const Field& f, const ModificationField& mod);

/// The bias that re-aligning g to f recovers at normalized time t:
/// t^(1/p(s)) - t, one value per grid cell of `grid`, in normalized units.
std::vector<double> true_timing_bias(const ModificationField& mod,
                                     const SpatialGrid& grid, double t);

/// Synthetic precipitation-like base climatology: a sharp wet-season pulse in
/// local summer (anti-phased hemispheres, timing drifting with latitude) and a
/// weaker secondary rain season, plus small seeded smooth bumps so distinct
/// seeds give distinct fields.
Field synthetic_base_field(std::size_t nlat = 36, std::size_t nlon = 72,
                           std::size_t ntime = 365, std::uint64_t seed = 0);

/// DP configuration for the simulation experiments: a roughness penalty keeps
/// the amplitude-scale mismatch of the modifications from being absorbed by
/// spurious "pinching" warps, which would otherwise leak amplitude into the
/// phase distance (and vice versa).
inline DpConfig simulation_dp_config() { return {0, 7, 3.0}; }

struct ExperimentRow {
    int amp_index;
    int phase_index;
    double range_km;
    SlicedElasticDistance distance;
    double rmse_value;
};

struct ExperimentGrid {
    std::vector<double> ranges_km = {750.0, 2500.0, 7500.0};
    bool include_control = true; // append the identity (0,0) modification
};

/// Fig-3-style disentanglement table: every (i, j) modification at every
/// kernel range, with the RMSE baseline column.
std::vector<ExperimentRow> run_disentanglement_experiment(
    const Field& f, const ExperimentGrid& grid,
    const DpConfig& dpcfg = simulation_dp_config(), std::size_t threads = 1);

struct BiasRecoveryRow {
    int amp_index;
    int phase_index;
    TimingBiasMap estimated;
    std::vector<double> true_bias_days; // same location order
    double fraction_within_tol;         // non-degenerate cells within tol
    double spatial_correlation;
};

/// Fig-4-style recovery: estimated vs true timing-bias maps at t_event.
std::vector<BiasRecoveryRow> run_bias_recovery_experiment(
    const Field& f, const std::vector<ModificationField>& mods, double t_event,
    const KernelConfig& kcfg, const DpConfig& dpcfg = {},
    double tol_days = 3.0, std::size_t threads = 1);

} // namespace efm
