#pragma once

#include <vector>

#include "flni/graph.hpp"
#include "flni/penalties.hpp"

namespace flni {

enum class DualAlgorithm {
    AcceleratedProjectedGradient,
    CoordinateDescent,
};

struct SolverOptions {
    double tol = 1e-8;      // relative duality-gap target
    long max_iter = 50000;  // total iteration budget (gradient steps + sweeps)
    DualAlgorithm algorithm = DualAlgorithm::AcceleratedProjectedGradient;
    bool record_objective_trace = false;
};

/// Solution of the box-constrained dual: one multiplier per edge.
struct DualSolution {
    std::vector<double> nu;
    long iterations = 0;
    double gap = 0.0;  // final relative duality gap P(beta) - g(nu)
    bool converged = false;
    /// Dual objective 0.5*||y - D^T nu||^2 at each accepted iterate, filled
    /// when SolverOptions::record_objective_trace is set. Non-increasing.
    std::vector<double> objective_trace;
};

/// Minimize 0.5*||y - D^T nu||^2 over the box -lambda_f <= nu_e <= lambda_f + lambda_ni.
///
/// Convergence is declared when the duality gap P(beta) - g(nu), with
/// beta = y - D^T nu, P the primal objective (fusion + one-sided penalties,
/// no lasso term) and g(nu) = 0.5*||y||^2 - 0.5*||y - D^T nu||^2, falls below
/// tol * (1 + |P(beta)|). The gap is evaluated in the cancellation-free form
///   sum_e [ lambda_f*|z_e| + lambda_ni*(z_e)_+ - z_e*nu_e ],  z = D beta,
/// whose terms are individually nonnegative on the box.
///
/// The iterate is always feasible (projection is the last step). If the
/// budget runs out the best iterate is returned with converged = false.
DualSolution solve_dual(const std::vector<double>& y, const IncidenceMatrix& D, double lambda_f,
                        double lambda_ni, const SolverOptions& opts = {});

/// beta = y - D^T nu. Exact sparse multiply, no tolerance.
std::vector<double> recover_primal(const std::vector<double>& y, const IncidenceMatrix& D,
                                   const std::vector<double>& nu);

/// Duality gap of an arbitrary feasible (y, nu) pair, same form as above.
double duality_gap(const std::vector<double>& y, const IncidenceMatrix& D,
                   const std::vector<double>& nu, double lambda_f, double lambda_ni);

}  // namespace flni
