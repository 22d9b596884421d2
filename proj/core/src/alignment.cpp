#include "efm/alignment.hpp"

#include "efm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

namespace efm {

namespace {

struct Step {
    int di; // advance along f's axis
    int dj; // advance along g's axis
    double sq;               // sqrt(dj / di)
    int off[8];              // floor(k * dj / di) for k < di
    double frac[8];          // fractional parts of the same
};

// Coprime steps (a, b) with 1 <= a, b <= max_slope, lexicographic order.
// Interpolation offsets along the edge are precomputed per step.
std::vector<Step> lattice_steps(std::size_t max_slope) {
    std::vector<Step> steps;
    const int m = static_cast<int>(std::min<std::size_t>(max_slope, 8));
    for (int a = 1; a <= m; ++a)
        for (int b = 1; b <= m; ++b) {
            if (std::gcd(a, b) != 1) continue;
            Step s{};
            s.di = a;
            s.dj = b;
            const double slope = static_cast<double>(b) / static_cast<double>(a);
            s.sq = std::sqrt(slope);
            for (int k = 0; k < a; ++k) {
                const double x = slope * static_cast<double>(k);
                s.off[k] = static_cast<int>(x);
                s.frac[k] = x - static_cast<double>(s.off[k]);
            }
            steps.push_back(s);
        }
    return steps;
}

// Edge cost from (i0, j0) to (i0+di, j0+dj): discretized integral of
// (q_f - sqrt(slope) * q_g(gamma))^2 over the segment, sampled at f's grid
// points (left-closed), plus an optional roughness penalty. Interior sample
// positions never leave [j0, j0+dj], so interpolation needs no clamping.
double edge_cost(const std::vector<double>& qf, const std::vector<double>& qg,
                 int i0, int j0, const Step& s, double h, double penalty) {
    double c = 0.0;
    for (int k = 0; k < s.di; ++k) {
        const double* g = &qg[static_cast<std::size_t>(j0 + s.off[k])];
        const double gv = g[0] + s.frac[k] * (g[1] - g[0]);
        const double d = qf[static_cast<std::size_t>(i0 + k)] - s.sq * gv;
        c += d * d;
    }
    if (penalty > 0.0) {
        const double r = s.sq - 1.0;
        c += penalty * r * r * static_cast<double>(s.di);
    }
    return c * h;
}

bool is_constant(const std::vector<double>& y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    return (*hi - *lo) <= 1e-12 * std::max(1.0, scale);
}

} // namespace

double phase_distance(const WarpingFunction& gamma_g) {
    const std::vector<double> dg = uniform_gradient(gamma_g.gamma);
    const std::size_t n = dg.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = std::sqrt(std::max(0.0, dg[k]));
    double integral = 0.5 * (s.front() + s.back());
    for (std::size_t k = 1; k + 1 < n; ++k) integral += s[k];
    integral *= h;
    return std::acos(std::clamp(integral, -1.0, 1.0));
}

bool canonical_order(const Func1D& f, const Func1D& g) {
    return !std::lexicographical_compare(g.y.begin(), g.y.end(), f.y.begin(),
                                         f.y.end());
}

AlignmentResult align(const Func1D& f, const Func1D& g, const DpConfig& cfg) {
    if (f.size() != g.size())
        throw ValidationError("align: inputs must share the same grid (resample first)");

    Func1D fr = f, gr = g;
    if (cfg.grid_n != 0 && cfg.grid_n != f.size()) {
        if (cfg.grid_n < 8) throw ValidationError("align: grid_n must be >= 8");
        fr = resample(f, cfg.grid_n);
        gr = resample(g, cfg.grid_n);
    }
    const std::size_t n = fr.size();
    if (n < 8) throw ValidationError("align: need at least 8 samples");

    AlignmentResult res;
    res.d_translation = std::abs(fr.origin_value() - gr.origin_value());

    // Run the DP on the canonically ordered pair so every reported quantity
    // is exactly symmetric; recover the user's orientation afterwards.
    const bool swapped = !canonical_order(fr, gr);
    const Func1D& first = swapped ? gr : fr;  // DP reference
    const Func1D& second = swapped ? fr : gr; // warped onto the reference

    const SrvfCurve qf = to_srvf(first);
    const SrvfCurve qg = to_srvf(second);

    // Constant inputs have zero SRVF: any warp is optimal. Return identity.
    if (cfg.penalty == 0.0 && (is_constant(fr.y) || is_constant(gr.y))) {
        res.gamma_g = WarpingFunction::identity(n);
        res.aligned_g = gr;
        res.d_amplitude = l2_distance(qf.q, qg.q);
        res.d_phase = 0.0;
        res.degenerate = true;
        return res;
    }

    const std::vector<Step> steps = lattice_steps(std::max<std::size_t>(1, cfg.max_slope));
    const double h = 1.0 / static_cast<double>(n - 1);
    const int N = static_cast<int>(n);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n * n, kInf);
    std::vector<int> pred(n * n, -1); // step index taken to reach the node
    cost[0] = 0.0;

    for (int i = 1; i < N; ++i) {
        for (int j = 1; j < N; ++j) {
            double best = kInf;
            int best_step = -1;
            int best_offdiag = 0;
            for (std::size_t s = 0; s < steps.size(); ++s) {
                const int pi = i - steps[s].di;
                const int pj = j - steps[s].dj;
                if (pi < 0 || pj < 0) continue;
                const double pc = cost[static_cast<std::size_t>(pi) * n + pj];
                if (pc == kInf) continue;
                const double c = pc + edge_cost(qf.q, qg.q, pi, pj, steps[s], h,
                                                cfg.penalty);
                const int offdiag = std::abs(pi - pj);
                if (c < best || (c == best && offdiag < best_offdiag)) {
                    best = c;
                    best_step = static_cast<int>(s);
                    best_offdiag = offdiag;
                }
            }
            cost[static_cast<std::size_t>(i) * n + j] = best;
            pred[static_cast<std::size_t>(i) * n + j] = best_step;
        }
    }

    if (cost[n * n - 1] == kInf)
        throw NumericalError("align: no feasible lattice path (slope window too tight)");
    res.dp_cost = cost[n * n - 1];

    // Backtrack the path and linearly fill gamma between its nodes.
    std::vector<std::pair<int, int>> path;
    int ci = N - 1, cj = N - 1;
    path.emplace_back(ci, cj);
    while (ci != 0 || cj != 0) {
        const int s = pred[static_cast<std::size_t>(ci) * n + cj];
        ci -= steps[static_cast<std::size_t>(s)].di;
        cj -= steps[static_cast<std::size_t>(s)].dj;
        path.emplace_back(ci, cj);
    }
    std::reverse(path.begin(), path.end());

    res.gamma_g.gamma.assign(n, 0.0);
    for (std::size_t p = 0; p + 1 < path.size(); ++p) {
        const auto [i0, j0] = path[p];
        const auto [i1, j1] = path[p + 1];
        const double slope =
            static_cast<double>(j1 - j0) / static_cast<double>(i1 - i0);
        for (int i = i0; i <= i1; ++i)
            res.gamma_g.gamma[static_cast<std::size_t>(i)] =
                (static_cast<double>(j0) + slope * static_cast<double>(i - i0)) * h;
    }
    res.gamma_g.validate_and_repair(1e-9);

    // Distances in the canonical orientation (symmetric by construction):
    // lattice slopes are bounded, so the phase integral of the inverse warp
    // equals the forward one analytically; reuse the forward value.
    const SrvfCurve qg_warped = warp_srvf(qg, res.gamma_g);
    res.d_amplitude = l2_distance(qf.q, qg_warped.q);
    res.d_phase = phase_distance(res.gamma_g);

    if (swapped) res.gamma_g = invert_warp(res.gamma_g);
    res.aligned_g = warp_function(gr, res.gamma_g);
    return res;
}

double timing_bias(const AlignmentResult& result, double t) {
    if (t < 0.0 || t > 1.0)
        throw ValidationError("timing_bias: t must be in [0, 1]");
    return interp_uniform(result.gamma_g.gamma, t) - t;
}

double bias_to_days(double b, double days_per_unit) {
    return b * days_per_unit;
}

} // namespace efm
