#pragma once

#include "efm/srvf.hpp"

#include <cstddef>

namespace efm {

struct DpConfig {
    std::size_t grid_n = 0;    // 0: use the common input resolution
    std::size_t max_slope = 7; // slope window for lattice steps
    double penalty = 0.0;      // warp roughness penalty coefficient
};

struct AlignmentResult {
    WarpingFunction gamma_g; // warps g onto f (gamma_f = identity)
    Func1D aligned_g;        // g o gamma_g
    double d_amplitude = 0.0;
    double d_phase = 0.0;     // in [0, pi/2]
    double d_translation = 0.0;
    double dp_cost = 0.0;     // accumulated lattice cost at the optimum
    bool degenerate = false;  // constant input, identity warp returned
};

/// Optimal time-warping alignment of g onto f over a monotone lattice by
/// dynamic programming. Both inputs must share the same uniform grid (use
/// resample() first). Deterministic: ties prefer the predecessor closest to
/// the diagonal, then lexicographic step order. The DP runs on the
/// canonically ordered pair (see canonical_order) and the warp is inverted
/// as needed, so d_amplitude/d_phase/d_translation and dp_cost are exactly
/// symmetric in (f, g).
AlignmentResult align(const Func1D& f, const Func1D& g, const DpConfig& cfg = {});

/// True when (f, g) is already in canonical DP order (lexicographic on the
/// sample values).
bool canonical_order(const Func1D& f, const Func1D& g);

/// gamma_g(t) - t by interpolation; positive means the event in g occurs
/// late relative to f.
double timing_bias(const AlignmentResult& result, double t);

/// Normalized bias to days.
double bias_to_days(double b, double days_per_unit = 365.0);

/// Phase distance for a given warp pair (gamma_f = identity):
/// arccos of the clamped integral of sqrt(gamma').
double phase_distance(const WarpingFunction& gamma_g);

} // namespace efm
