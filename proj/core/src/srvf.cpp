#include "efm/srvf.hpp"

#include "efm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace efm {

WarpingFunction WarpingFunction::identity(std::size_t n) {
    WarpingFunction w;
    w.gamma.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        w.gamma[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    return w;
}

void WarpingFunction::validate_and_repair(double tol) {
    if (gamma.size() < 2) throw InvalidWarp("WarpingFunction: too few samples");
    double max_adjust = 0.0;
    for (double& v : gamma) {
        if (!std::isfinite(v)) throw InvalidWarp("WarpingFunction: non-finite value");
        const double c = std::clamp(v, 0.0, 1.0);
        max_adjust = std::max(max_adjust, std::abs(c - v));
        v = c;
    }
    max_adjust = std::max(max_adjust, std::abs(gamma.front()));
    max_adjust = std::max(max_adjust, std::abs(gamma.back() - 1.0));
    gamma.front() = 0.0;
    gamma.back() = 1.0;
    for (std::size_t k = 1; k < gamma.size(); ++k) {
        if (gamma[k] < gamma[k - 1]) {
            max_adjust = std::max(max_adjust, gamma[k - 1] - gamma[k]);
            gamma[k] = gamma[k - 1];
        }
    }
    if (max_adjust > tol)
        throw InvalidWarp("WarpingFunction: repair adjustment " +
                          std::to_string(max_adjust) + " exceeds tolerance");
}

std::vector<double> uniform_gradient(const std::vector<double>& y) {
    const std::size_t n = y.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> d(n);
    d[0] = (y[1] - y[0]) / h;
    d[n - 1] = (y[n - 1] - y[n - 2]) / h;
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k - 1]) / (2.0 * h);
    return d;
}

SrvfCurve to_srvf(const Func1D& f) {
    if (f.size() < 4) throw ValidationError("to_srvf: need at least 4 samples");
    const std::vector<double> df = uniform_gradient(f.y);
    SrvfCurve q;
    q.q.resize(df.size());
    for (std::size_t k = 0; k < df.size(); ++k)
        q.q[k] = std::copysign(std::sqrt(std::abs(df[k])), df[k]);
    return q;
}

Func1D from_srvf(const SrvfCurve& q, double f0) {
    const std::size_t n = q.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    Func1D f;
    f.y.resize(n);
    f.y[0] = f0;
    auto speed = [&](std::size_t k) { return q.q[k] * std::abs(q.q[k]); };
    for (std::size_t k = 1; k < n; ++k)
        f.y[k] = f.y[k - 1] + 0.5 * h * (speed(k - 1) + speed(k));
    return f;
}

double interp_uniform(const std::vector<double>& y, double x) {
    const std::size_t n = y.size();
    const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(k);
    return y[k] + frac * (y[k + 1] - y[k]);
}

Func1D warp_function(const Func1D& f, const WarpingFunction& gamma) {
    WarpingFunction g = gamma;
    g.validate_and_repair();
    Func1D out;
    out.y.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        out.y[k] = interp_uniform(f.y, g.gamma[k]);
    return out;
}

SrvfCurve warp_srvf(const SrvfCurve& q, const WarpingFunction& gamma) {
    WarpingFunction g = gamma;
    g.validate_and_repair();
    const std::vector<double> dg = uniform_gradient(g.gamma);
    SrvfCurve out;
    out.q.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        out.q[k] = interp_uniform(q.q, g.gamma[k]) * std::sqrt(std::max(0.0, dg[k]));
    return out;
}

WarpingFunction invert_warp(const WarpingFunction& gamma) {
    WarpingFunction g = gamma;
    g.validate_and_repair();
    const std::size_t n = g.size();
    const double h = 1.0 / static_cast<double>(n - 1);

    // Flat stretches make the inverse ill-defined beyond grid resolution.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        if (g.gamma[k + 2] - g.gamma[k] <= 0.0 && k + 3 < n &&
            g.gamma[k + 3] - g.gamma[k] <= 0.0)
            throw NonInvertible("invert_warp: flat segment longer than 2 grid steps");
    }

    WarpingFunction inv;
    inv.gamma.resize(n);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = static_cast<double>(k) * h;
        while (j + 1 < n && g.gamma[j + 1] < target) ++j;
        if (j + 1 >= n) {
            inv.gamma[k] = 1.0;
            continue;
        }
        const double lo = g.gamma[j], hi = g.gamma[j + 1];
        const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
        inv.gamma[k] = (static_cast<double>(j) + std::clamp(frac, 0.0, 1.0)) * h;
    }
    inv.gamma.front() = 0.0;
    inv.gamma.back() = 1.0;
    inv.validate_and_repair(1.0); // numerically safe; inverse is monotone by build
    return inv;
}

Func1D resample(const Func1D& f, std::size_t n) {
    if (f.size() == n) return f;
    Func1D out;
    out.y.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.y[k] =
            interp_uniform(f.y, static_cast<double>(k) / static_cast<double>(n - 1));
    return out;
}

double l2_norm(const std::vector<double>& v) {
    const std::size_t n = v.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    double s = 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
    for (std::size_t k = 1; k + 1 < n; ++k) s += v[k] * v[k];
    return std::sqrt(s * h);
}

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
    return l2_norm(d);
}

} // namespace efm
