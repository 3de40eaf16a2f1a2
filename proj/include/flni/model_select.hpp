#pragma once

#include <vector>

#include "flni/estimators.hpp"

namespace flni {

/// Number of fused groups (all groups). Only defined for fits with
/// lambda_l = 0; throws std::invalid_argument otherwise.
int df_fni(const FitResult& fit);

/// Number of fused groups not flagged zero.
int df_flni(const FitResult& fit);

/// RSS - n*sigma2 + 2*sigma2*K with K = df_flni(fit).
double cp_statistic(const Signal& y, const FitResult& fit, double sigma2);

struct PathEntry {
    Penalties penalties;
    FitResult fit;
    double cp = 0.0;
};

struct PathResult {
    std::vector<PathEntry> entries;
    double sigma2 = 0.0;
    int best_index = 0;  // minimal cp; ties broken by smallest index
};

/// Fit every grid point (cold starts, so results are independent of order and
/// thread count), compute the Cp statistic for each and select the minimum.
/// n_threads <= 1 runs sequentially; entries are always in grid order.
PathResult sweep_path(const Signal& y, const OrderGraph& g, const std::vector<Penalties>& grid,
                      double sigma2, const SolverOptions& opts = {}, int n_threads = 1);

/// Heuristic noise estimate from the edge differences of the raw signal:
/// (median_e |(D y)_e| / (sqrt(2) * 0.6745))^2. Requires at least one edge.
/// Returns 0 for a constant signal, which callers should treat as degenerate.
double estimate_sigma2_mad(const Signal& y, const OrderGraph& g);

}  // namespace flni
