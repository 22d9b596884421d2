#pragma once

#include <cstddef>
#include <vector>

namespace efm {

// Univariate function sampled on the uniform grid t_k = k/(n-1) on [0, 1].
struct Func1D {
    std::vector<double> y;

    std::size_t size() const { return y.size(); }
    double origin_value() const { return y.front(); }
};

// Square-root velocity representation on the same grid.
struct SrvfCurve {
    std::vector<double> q;

    std::size_t size() const { return q.size(); }
};

// Boundary-preserving weakly increasing map of [0, 1], sampled on the
// uniform grid. gamma.front() == 0, gamma.back() == 1.
struct WarpingFunction {
    std::vector<double> gamma;

    std::size_t size() const { return gamma.size(); }
    static WarpingFunction identity(std::size_t n);
    /// Clamp to [0,1], pin the endpoints and re-monotonize. Throws
    /// InvalidWarp when the required adjustment exceeds tol.
    void validate_and_repair(double tol = 1e-10);
};

/// Derivative by centered differences (one-sided at the boundaries).
std::vector<double> uniform_gradient(const std::vector<double>& y);

/// q(t) = sign(f'(t)) sqrt(|f'(t)|).
SrvfCurve to_srvf(const Func1D& f);

/// f(t) = f0 + integral of q|q|, trapezoidal rule.
Func1D from_srvf(const SrvfCurve& q, double f0);

/// Linear interpolation of samples y (uniform grid on [0,1]) at point x.
double interp_uniform(const std::vector<double>& y, double x);

/// f composed with gamma via monotone linear interpolation.
Func1D warp_function(const Func1D& f, const WarpingFunction& gamma);

/// Group action on SRVFs: (q o gamma) * sqrt(gamma').
SrvfCurve warp_srvf(const SrvfCurve& q, const WarpingFunction& gamma);

/// Inverse warp by swapping axes; requires gamma to have no flat segment
/// longer than 2 grid steps.
WarpingFunction invert_warp(const WarpingFunction& gamma);

/// Resample to an n-point uniform grid by linear interpolation.
Func1D resample(const Func1D& f, std::size_t n);

/// L2 norm with the uniform-grid trapezoidal weight.
double l2_norm(const std::vector<double>& v);
double l2_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace efm
