#include "efm/trend_filter.hpp"

#include "efm/errors.hpp"
#include "efm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace efm {

namespace {

// y = D3 * x, third-order forward differences (m = n-3 rows).
void apply_d3(const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t m = x.size() - 3;
    for (std::size_t i = 0; i < m; ++i)
        y[i] = -x[i] + 3.0 * x[i + 1] - 3.0 * x[i + 2] + x[i + 3];
}

// y = D3' * v, scatter of the stencil.
void apply_d3t(const std::vector<double>& v, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        y[i] += -v[i];
        y[i + 1] += 3.0 * v[i];
        y[i + 2] += -3.0 * v[i];
        y[i + 3] += v[i];
    }
}

// Banded SPD matrix A = I + rho*D3'D3, bandwidth 3, stored by diagonals:
// band[d][i] = A(i+d, i). Factor once, reuse for every ADMM iteration.
class BandedCholesky {
public:
    BandedCholesky(std::size_t n, double rho) : n_(n) {
        for (auto& b : band_) b.assign(n, 0.0);
        // D3'D3 row stencils: accumulate contributions of each D3 row.
        static constexpr double stencil[4] = {-1.0, 3.0, -3.0, 1.0};
        const std::size_t m = n - 3;
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = 0; b <= a; ++b) {
                    band_[a - b][r + b] += rho * stencil[a] * stencil[b];
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) band_[0][i] += 1.0;
        factor();
    }

    // Solve A x = b in place.
    void solve(std::vector<double>& b) const {
        // Forward substitution with L (unit-free, L stored in band_).
        for (std::size_t i = 0; i < n_; ++i) {
            double s = b[i];
            const std::size_t kmax = std::min<std::size_t>(3, i);
            for (std::size_t k = 1; k <= kmax; ++k) s -= band_[k][i - k] * b[i - k];
            b[i] = s / band_[0][i];
        }
        // Back substitution with L'.
        for (std::size_t ii = n_; ii-- > 0;) {
            double s = b[ii];
            const std::size_t kmax = std::min<std::size_t>(3, n_ - 1 - ii);
            for (std::size_t k = 1; k <= kmax; ++k) s -= band_[k][ii] * b[ii + k];
            b[ii] = s / band_[0][ii];
        }
    }

private:
    void factor() {
        for (std::size_t j = 0; j < n_; ++j) {
            double d = band_[0][j];
            const std::size_t kmax = std::min<std::size_t>(3, j);
            for (std::size_t k = 1; k <= kmax; ++k) {
                const double l = band_[k][j - k];
                d -= l * l;
            }
            if (d <= 0.0)
                throw NumericalError("trend_filter: banded Cholesky breakdown");
            d = std::sqrt(d);
            band_[0][j] = d;
            for (std::size_t i = 1; i <= 3 && j + i < n_; ++i) {
                double s = band_[i][j];
                for (std::size_t k = 1; k + i <= 3 && k <= j; ++k)
                    s -= band_[k + i][j - k] * band_[k][j - k];
                band_[i][j] = s / d;
            }
        }
    }

    std::size_t n_;
    std::vector<double> band_[4];
};

} // namespace

double trend_filter_objective(const std::vector<double>& y,
                              const std::vector<double>& beta, double lambda) {
    double quad = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - beta[i];
        quad += d * d;
    }
    double pen = 0.0;
    for (std::size_t i = 0; i + 3 < beta.size(); ++i)
        pen += std::abs(-beta[i] + 3.0 * beta[i + 1] - 3.0 * beta[i + 2] +
                        beta[i + 3]);
    return 0.5 * quad + lambda * pen;
}

TrendFilterResult trend_filter(const std::vector<double>& y,
                               const SmootherConfig& cfg) {
    const std::size_t n = y.size();
    if (n < 4) throw ValidationError("trend_filter: need at least 4 samples");
    for (double v : y)
        if (!std::isfinite(v)) throw NonFiniteValue("trend_filter: non-finite input");
    if (cfg.lambda < 0.0) throw ValidationError("trend_filter: lambda must be >= 0");
    if (cfg.lambda == 0.0) return {y, true, 0};

    const std::size_t m = n - 3;
    const double rho = cfg.lambda;
    const BandedCholesky chol(n, rho);

    std::vector<double> beta = y;
    std::vector<double> z(m, 0.0), u(m, 0.0), z_old(m);
    std::vector<double> dbeta(m), rhs(n), tmp(n);

    std::vector<double> best_beta = y;
    double best_obj = trend_filter_objective(y, y, cfg.lambda);

    const double kappa = cfg.lambda / rho; // soft-threshold level
    bool converged = false;
    std::size_t it = 0;
    for (; it < cfg.max_iter; ++it) {
        // beta update: (I + rho D'D) beta = y + rho D'(z - u)
        for (std::size_t i = 0; i < m; ++i) z_old[i] = z[i] - u[i];
        apply_d3t(z_old, tmp);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] + rho * tmp[i];
        beta = rhs;
        chol.solve(beta);

        apply_d3(beta, dbeta);

        // z update: soft threshold
        std::copy(z.begin(), z.end(), z_old.begin());
        for (std::size_t i = 0; i < m; ++i) {
            const double v = dbeta[i] + u[i];
            z[i] = std::copysign(std::max(0.0, std::abs(v) - kappa), v);
        }

        // dual update
        double pri = 0.0, dua = 0.0, znorm = 0.0, dnorm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = dbeta[i] - z[i];
            u[i] += r;
            pri += r * r;
            const double s = z[i] - z_old[i];
            dua += s * s;
            znorm += z[i] * z[i];
            dnorm += dbeta[i] * dbeta[i];
        }
        pri = std::sqrt(pri);
        dua = rho * std::sqrt(dua);

        const double obj = trend_filter_objective(y, beta, cfg.lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best_beta = beta;
        }

        const double scale = std::max(1.0, std::sqrt(std::max(znorm, dnorm)));
        if (pri <= cfg.tol * scale && dua <= cfg.tol * scale) {
            converged = true;
            ++it;
            break;
        }
    }

    return {std::move(best_beta), converged, it};
}

Field smooth_field(const Field& field, const SmootherConfig& cfg,
                   std::size_t threads) {
    const std::size_t ncell = field.grid().size();
    const std::size_t ntime = field.ntime();
    std::vector<double> out(field.values().size());
    std::vector<int> failed(ncell, 0);

    parallel_for(ncell, threads, [&](std::size_t c) {
        std::vector<double> y(ntime);
        for (std::size_t k = 0; k < ntime; ++k) y[k] = field.values()[k * ncell + c];
        TrendFilterResult r = trend_filter(y, cfg);
        if (!r.converged) failed[c] = 1;
        for (std::size_t k = 0; k < ntime; ++k) out[k * ncell + c] = r.beta[k];
    });

    for (std::size_t c = 0; c < ncell; ++c) {
        if (failed[c])
            throw NoConvergence("smooth_field: no convergence at cell " +
                                std::to_string(c / field.grid().nlon()) + "," +
                                std::to_string(c % field.grid().nlon()));
    }
    return field.with_values(std::move(out));
}

} // namespace efm
