#pragma once

#include <vector>

#include "flni/graph.hpp"
#include "flni/penalties.hpp"

namespace flni::oracle {

/// Isotonic (non-decreasing) least-squares projection on a chain, computed by
/// pool-adjacent-violators.
std::vector<double> pava_chain(const std::vector<double>& y);

/// Reference minimizer of the full three-penalty objective, for small
/// instances (n <= 30 recommended). Runs an ADMM splitting on (beta, D beta)
/// from the deterministic starts y, 0 and mean(y)*1 until the objective is
/// stable within `precision`, and returns the best point found. Shares no
/// numerical code with the dual-box solver.
std::vector<double> brute_force_fit(const std::vector<double>& y, const OrderGraph& g,
                                    const Penalties& p, double precision);

/// Subgradient variables of the stationarity equations
///   (beta - y) + lambda_ni * D^T q + lambda_f * D^T t + lambda_l * s = 0
/// with q in [0,1]^m, t in [-1,1]^m, s in [-1,1]^n, fixed to their forced
/// values on strictly-signed coordinates.
struct SubgradientCertificate {
    std::vector<double> q;
    std::vector<double> t;
    std::vector<double> s;
    double residual = 0.0;  // max-norm violation of stationarity
};

/// Fix q, t, s where the sign pattern of beta forces them (differences and
/// entries larger than tol * max(1, max|beta|)), then pick the remaining boxed
/// variables to minimize the max stationarity residual (a minimax linear
/// program). A small residual certifies optimality of beta; a large one
/// certifies non-optimality.
SubgradientCertificate certify_optimality(const std::vector<double>& y, const OrderGraph& g,
                                          const Penalties& p, const std::vector<double>& beta,
                                          double tol);

// --- small trusted machinery behind certify_optimality, exposed for tests ---

struct LinearProgramResult {
    std::vector<double> x;
    double value = 0.0;
    bool feasible = false;
};

/// min c^T x  subject to  A x <= b, x >= 0.
/// Dense two-phase tableau simplex with Bland's rule.
LinearProgramResult simplex_min(const std::vector<double>& c,
                                const std::vector<std::vector<double>>& a,
                                const std::vector<double>& b);

struct MinimaxResult {
    std::vector<double> x;
    double value = 0.0;
};

/// min over lo <= x <= hi of max_i |base_i + (C x)_i|, C given as dense rows.
MinimaxResult minimize_max_abs_affine(const std::vector<double>& base,
                                      const std::vector<std::vector<double>>& c_rows,
                                      const std::vector<double>& lo,
                                      const std::vector<double>& hi);

}  // namespace flni::oracle
