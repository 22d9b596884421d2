#pragma once

#include "efm/field.hpp"

#include <cstddef>
#include <vector>

namespace efm {

// Order-2 (quadratic) l1 trend filtering:
//   minimize over beta   0.5*||y - beta||^2 + lambda*||D3 beta||_1
// where D3 is the third-order difference operator on the interior
// (ntime-3 rows). Solved by ADMM with banded Cholesky factorization.
struct SmootherConfig {
    double lambda = 1250.0;
    std::size_t max_iter = 5000;
    double tol = 1e-6;
};

struct TrendFilterResult {
    std::vector<double> beta;
    bool converged = true;
    std::size_t iterations = 0;
};

/// Trend-filtering objective at beta.
double trend_filter_objective(const std::vector<double>& y,
                              const std::vector<double>& beta, double lambda);

TrendFilterResult trend_filter(const std::vector<double>& y,
                               const SmootherConfig& cfg);

/// trend_filter applied independently at every grid cell, optionally in
/// parallel. Cell results do not depend on the thread count.
Field smooth_field(const Field& field, const SmootherConfig& cfg,
                   std::size_t threads = 1);

} // namespace efm
