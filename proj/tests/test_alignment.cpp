#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efm/alignment.hpp"
#include "efm/errors.hpp"
#include "efm/srvf.hpp"
#include "lattice_oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

using namespace efm;

namespace {
constexpr double kPi = std::numbers::pi;

Func1D sample(std::size_t n, const std::function<double(double)>& fn) {
    Func1D f;
    f.y.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        f.y[k] = fn(static_cast<double>(k) / static_cast<double>(n - 1));
    return f;
}

} // namespace

TEST_CASE("self-alignment is exact") {
    const Func1D f = sample(129, [](double t) { return std::sin(2.0 * kPi * t); });
    const auto r = align(f, f);
    CHECK(r.d_amplitude < 1e-9);
    CHECK(r.d_phase < 1e-9);
    CHECK(r.d_translation == 0.0);
    for (std::size_t k = 0; k < r.gamma_g.size(); ++k)
        CHECK(r.gamma_g.gamma[k] ==
              doctest::Approx(static_cast<double>(k) / 128.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("pure translation isolates d_translation") {
    const Func1D f = sample(129, [](double t) { return std::sin(2.0 * kPi * t); });
    Func1D g = f;
    for (double& x : g.y) x += 3.0;
    const auto r = align(f, g);
    CHECK(r.d_amplitude < 1e-9);
    CHECK(r.d_phase < 1e-9);
    CHECK(r.d_translation == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("constant inputs are degenerate") {
    const Func1D f = sample(64, [](double) { return 2.0; });
    const Func1D g = sample(64, [](double t) { return std::sin(2.0 * kPi * t); });
    const auto r = align(g, f);
    CHECK(r.degenerate);
    CHECK(r.d_phase == 0.0);
    for (std::size_t k = 0; k < r.gamma_g.size(); ++k)
        CHECK(r.gamma_g.gamma[k] == static_cast<double>(k) / 63.0);
}

TEST_CASE("warp recovery: g = f(t^2) at n = 365") {
    const Func1D f = sample(365, [](double t) { return std::sin(2.0 * kPi * t); });
    const Func1D g = sample(365, [](double t) { return std::sin(2.0 * kPi * t * t); });
    const auto r = align(f, g);
    // gamma_g maps g onto f, so it approximates sqrt(t); the generating
    // warp t^2 is its inverse.
    const WarpingFunction recovered = invert_warp(r.gamma_g);
    double sup = 0.0;
    for (std::size_t k = 0; k < recovered.size(); ++k) {
        const double t = static_cast<double>(k) / 364.0;
        sup = std::max(sup, std::abs(recovered.gamma[k] - t * t));
    }
    CHECK(sup < 0.02);
    const double dp_expected = std::acos(2.0 * std::sqrt(2.0) / 3.0);
    CHECK(std::abs(r.d_phase - dp_expected) < 0.02);
}

TEST_CASE("DP equals exhaustive path enumeration at n = 16") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(0.5, 2.0), ph(0.0, 1.0);
    for (int pair = 0; pair < 5; ++pair) {
        const double a1 = amp(rng), a2 = amp(rng), p1 = ph(rng), p2 = ph(rng);
        const Func1D f = sample(16, [&](double t) {
            return a1 * std::sin(2.0 * kPi * (t + p1)) + 0.4 * std::cos(5.0 * t);
        });
        const Func1D g = sample(16, [&](double t) {
            return a2 * std::sin(2.0 * kPi * (t + p2)) + 0.3 * t;
        });
        const auto r = align(f, g);
        const bool fwd = canonical_order(f, g);
        CHECK(r.dp_cost == oracle::min_cost(fwd ? f : g, fwd ? g : f, 7));
    }
}

TEST_CASE("timing bias sign: a delayed event is a positive bias") {
    auto bump = [](double t, double c) {
        return std::exp(-std::pow((t - c) / 0.08, 2));
    };
    const Func1D f = sample(365, [&](double t) { return bump(t, 0.45); });
    const Func1D g = sample(365, [&](double t) { return bump(t, 0.55); });
    const auto r = align(f, g);
    CHECK(timing_bias(r, 0.45) > 0.05);
    CHECK(timing_bias(r, 0.45) < 0.15);
    CHECK(bias_to_days(timing_bias(r, 0.45)) ==
          doctest::Approx(36.5).epsilon(0.3));
    CHECK_THROWS_AS(timing_bias(r, 1.5), ValidationError);
}

TEST_CASE("d_amplitude is approximately symmetric") {
    const Func1D f = sample(201, [](double t) {
        return std::sin(2.0 * kPi * t) + 0.5 * std::sin(4.0 * kPi * t);
    });
    const Func1D g = sample(201, [](double t) {
        return 1.3 * std::sin(2.0 * kPi * std::pow(t, 1.3));
    });
    const auto rf = align(f, g);
    const auto rg = align(g, f);
    CHECK(rf.d_amplitude == doctest::Approx(rg.d_amplitude).epsilon(0.05));
    CHECK(rf.d_translation == doctest::Approx(rg.d_translation).epsilon(1e-12));
}

TEST_CASE("d_phase lies in [0, pi/2] and penalizes stronger warps") {
    const Func1D f = sample(365, [](double t) { return std::sin(2.0 * kPi * t); });
    double prev = -1.0;
    for (double p : {1.0, 1.5, 2.5}) {
        const Func1D g = sample(365, [&](double t) {
            return std::sin(2.0 * kPi * std::pow(t, p));
        });
        const auto r = align(f, g);
        CHECK(r.d_phase >= 0.0);
        CHECK(r.d_phase <= kPi / 2.0 + 1e-12);
        CHECK(r.d_phase > prev);
        prev = r.d_phase;
    }
}

TEST_CASE("alignment reduces the unaligned amplitude residual") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1.1, 2.0);
    for (int it = 0; it < 10; ++it) {
        const double p = u(rng);
        const Func1D f = sample(257, [](double t) { return std::sin(2.0 * kPi * t); });
        const Func1D g = sample(257, [&](double t) {
            return std::sin(2.0 * kPi * std::pow(t, p));
        });
        const SrvfCurve qf = to_srvf(f), qg = to_srvf(g);
        const auto r = align(f, g);
        CHECK(r.d_amplitude <= l2_distance(qf.q, qg.q) + 1e-9);
    }
}

TEST_CASE("resampling through DpConfig::grid_n") {
    const Func1D f = sample(100, [](double t) { return std::sin(2.0 * kPi * t); });
    const Func1D g = sample(100, [](double t) {
        return std::sin(2.0 * kPi * std::pow(t, 1.4));
    });
    DpConfig cfg;
    cfg.grid_n = 257;
    const auto r = align(f, g, cfg);
    CHECK(r.gamma_g.size() == 257);
    CHECK(r.d_phase > 0.05);
}
