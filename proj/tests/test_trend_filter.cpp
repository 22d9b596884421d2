#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efm/errors.hpp"
#include "efm/trend_filter.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace efm;

namespace {

// Third-order difference rows: (D b)_i = -b_i + 3 b_{i+1} - 3 b_{i+2} + b_{i+3}.
std::vector<double> apply_d3(const std::vector<double>& b) {
    const std::size_t m = b.size() >= 3 ? b.size() - 3 : 0;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = -b[i] + 3.0 * b[i + 1] - 3.0 * b[i + 2] + b[i + 3];
    return out;
}

std::vector<double> apply_d3t(const std::vector<double>& v, std::size_t n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] += -v[i];
        out[i + 1] += 3.0 * v[i];
        out[i + 2] += -3.0 * v[i];
        out[i + 3] += v[i];
    }
    return out;
}

// Independent oracle: FISTA on the dual
//   max_{|v|_inf <= lambda}  v' D y - 0.5 ||D' v||^2,   beta = y - D' v.
std::vector<double> dual_oracle(const std::vector<double>& y, double lambda,
                                std::size_t iters) {
    const std::size_t n = y.size();
    const std::size_t m = n - 3;
    const std::vector<double> dy = apply_d3(y);
    std::vector<double> v(m, 0.0), v_prev(m, 0.0), w(m, 0.0);
    const double step = 1.0 / 64.0; // ||D D'|| <= 64 for the cubic stencil
    double t = 1.0;
    for (std::size_t it = 0; it < iters; ++it) {
        const std::vector<double> dtw = apply_d3t(w, n);
        const std::vector<double> ddtw = apply_d3(dtw);
        v_prev = v;
        for (std::size_t i = 0; i < m; ++i)
            v[i] = std::clamp(w[i] + step * (dy[i] - ddtw[i]), -lambda, lambda);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < m; ++i)
            w[i] = v[i] + (t - 1.0) / t_next * (v[i] - v_prev[i]);
        t = t_next;
    }
    std::vector<double> beta(n);
    const std::vector<double> dtv = apply_d3t(v, n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = y[i] - dtv[i];
    return beta;
}

std::vector<double> random_series(std::size_t n, std::uint64_t seed,
                                  double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, scale);
    std::vector<double> y(n);
    for (double& x : y) x = g(rng);
    return y;
}

} // namespace

TEST_CASE("quadratic inputs are exact fixed points") {
    for (double lambda : {1.0, 100.0, 1250.0}) {
        std::vector<double> y(60);
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double t = static_cast<double>(k);
            y[k] = 2.0 - 0.3 * t + 0.01 * t * t;
        }
        const auto r = trend_filter(y, {lambda, 5000, 1e-10});
        CHECK(r.converged);
        for (std::size_t k = 0; k < y.size(); ++k)
            CHECK(r.beta[k] == doctest::Approx(y[k]).epsilon(1e-10));
    }
}

TEST_CASE("lambda = 0 returns the input") {
    const auto y = random_series(40, 3);
    const auto r = trend_filter(y, {0.0, 10, 1e-8});
    CHECK(r.beta == y);
}

TEST_CASE("objective never increases relative to the input") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto y = random_series(50, seed, 2.0);
        const SmootherConfig cfg{10.0, 3000, 1e-8};
        const auto r = trend_filter(y, cfg);
        CHECK(trend_filter_objective(y, r.beta, cfg.lambda) <=
              trend_filter_objective(y, y, cfg.lambda) + 1e-9);
    }
}

TEST_CASE("matches the projected-gradient dual oracle") {
    for (double lambda : {0.5, 5.0, 50.0}) {
        for (std::uint64_t seed = 11; seed < 14; ++seed) {
            const auto y = random_series(48, seed, 3.0);
            const auto r = trend_filter(y, {lambda, 300000, 1e-12});
            const auto oracle = dual_oracle(y, lambda, 200000);
            const double fo = trend_filter_objective(y, oracle, lambda);
            const double fr = trend_filter_objective(y, r.beta, lambda);
            CHECK(fr <= fo + 1e-7);
            for (std::size_t k = 0; k < y.size(); ++k)
                CHECK(r.beta[k] == doctest::Approx(oracle[k]).epsilon(2e-4).scale(1.0));
        }
    }
}

TEST_CASE("shift equivariance") {
    const auto y = random_series(45, 77, 2.0);
    auto shifted = y;
    for (double& x : shifted) x += 13.25;
    const SmootherConfig cfg{20.0, 20000, 1e-12};
    const auto a = trend_filter(y, cfg);
    const auto b = trend_filter(shifted, cfg);
    for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(b.beta[k] - 13.25 == doctest::Approx(a.beta[k]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("scale equivariance: scaling y and lambda together") {
    const auto y = random_series(45, 78, 2.0);
    auto scaled = y;
    for (double& x : scaled) x *= 4.0;
    const auto a = trend_filter(y, {15.0, 30000, 1e-12});
    const auto b = trend_filter(scaled, {60.0, 30000, 1e-12});
    for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(b.beta[k] / 4.0 == doctest::Approx(a.beta[k]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("large lambda approaches the least-squares quadratic") {
    std::vector<double> y(80);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 0.05);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = static_cast<double>(k) / 79.0;
        y[k] = 1.0 + 2.0 * t - 1.5 * t * t + g(rng);
    }
    const auto r = trend_filter(y, {1e7, 50000, 1e-12});
    // D3 beta ~ 0: the fit is a single quadratic.
    const auto curv = apply_d3(r.beta);
    for (double c : curv) CHECK(std::abs(c) < 1e-6);
}

TEST_CASE("smooth_field treats cells independently of thread count") {
    const SpatialGrid grid = SpatialGrid::uniform(3, 4);
    std::vector<double> v(3 * 4 * 30);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(2.0, 1.0);
    for (double& x : v) x = g(rng);
    const Field f(grid, 30, std::move(v));
    const SmootherConfig cfg{5.0, 20000, 1e-5};
    const Field a = smooth_field(f, cfg, 1);
    const Field b = smooth_field(f, cfg, 4);
    CHECK(a.values() == b.values()); // bitwise
}

TEST_CASE("smooth_field leaves constant cells untouched") {
    const SpatialGrid grid = SpatialGrid::uniform(2, 2);
    const Field f(grid, 20, std::vector<double>(2 * 2 * 20, 3.5));
    const Field s = smooth_field(f, {1250.0, 2000, 1e-8}, 2);
    for (double x : s.values()) CHECK(x == doctest::Approx(3.5).epsilon(1e-12));
}
