#pragma once

// Exhaustive monotone-lattice-path oracle for the alignment DP, written
// independently of the library's DP implementation. Edge costs are
// accumulated left to right exactly as a path is walked, so the optimal
// value is bit-comparable with the DP's backtracked cost.

#include "efm/srvf.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline double edge(const std::vector<double>& qf, const std::vector<double>& qg,
                   int i0, int j0, int a, int b, double h) {
    const double slope = static_cast<double>(b) / static_cast<double>(a);
    const double sq = std::sqrt(slope);
    double c = 0.0;
    for (int k = 0; k < a; ++k) {
        const double x = slope * static_cast<double>(k);
        const int o = static_cast<int>(x);
        const double frac = x - static_cast<double>(o);
        const std::size_t j = static_cast<std::size_t>(j0 + o);
        const double gv = qg[j] + frac * (qg[j + 1] - qg[j]);
        const double d = qf[static_cast<std::size_t>(i0 + k)] - sq * gv;
        c += d * d;
    }
    return c * h;
}

struct State {
    const std::vector<double>* qf;
    const std::vector<double>* qg;
    std::vector<std::pair<int, int>> steps;
    int n;
    double h;
    double best;
    long paths;
};

inline void dfs(State& st, int i, int j, double acc) {
    if (i == st.n - 1 && j == st.n - 1) {
        ++st.paths;
        if (acc < st.best) st.best = acc;
        return;
    }
    if (acc >= st.best) return; // edge costs are nonnegative
    for (const auto& [a, b] : st.steps) {
        const int ni = i + a, nj = j + b;
        if (ni >= st.n || nj >= st.n) continue;
        dfs(st, ni, nj, acc + edge(*st.qf, *st.qg, i, j, a, b, st.h));
    }
}

inline double min_cost(const efm::Func1D& f, const efm::Func1D& g,
                       std::size_t max_slope) {
    const efm::SrvfCurve qf = efm::to_srvf(f), qg = efm::to_srvf(g);
    State st;
    st.qf = &qf.q;
    st.qg = &qg.q;
    const int m = static_cast<int>(max_slope);
    for (int a = 1; a <= m; ++a)
        for (int b = 1; b <= m; ++b)
            if (std::gcd(a, b) == 1) st.steps.emplace_back(a, b);
    st.n = static_cast<int>(f.size());
    st.h = 1.0 / static_cast<double>(st.n - 1);
    st.best = std::numeric_limits<double>::infinity();
    st.paths = 0;
    dfs(st, 0, 0, 0.0);
    return st.best;
}

} // namespace oracle
