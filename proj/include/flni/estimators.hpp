#pragma once

#include <vector>

#include "flni/graph.hpp"
#include "flni/group_partition.hpp"
#include "flni/penalties.hpp"
#include "flni/solver.hpp"

namespace flni {

/// Data vector indexed by graph vertices. All entries must be finite.
using Signal = std::vector<double>;

/// A fitted estimate with its diagnostics. `df` follows the group-count rule:
/// the total number of fused groups for the plain (unthresholded) fits, the
/// number of non-zero fused groups for the soft-thresholded fits.
struct FitResult {
    Signal beta;
    DualSolution dual;
    Penalties penalties;
    double objective = 0.0;
    GroupPartition groups;
    int df = 0;
};

/// Componentwise max(x, 0).
Signal positive_part(Signal x);

/// 0.5*||y - beta||^2 + lambda_f*sum_e |(D beta)_e| + lambda_l*sum_i |beta_i|
///   + lambda_ni*sum_e ((D beta)_e)_+
double objective(const Signal& y, const Signal& beta, const OrderGraph& g, const Penalties& p);

/// Shrink toward zero by lambda_l with a dead zone; |beta_i| <= lambda_l maps to 0.
Signal soft_threshold(Signal beta, double lambda_l);

/// The shifted data vector y - (lambda_ni/2) * D^T 1 that turns a
/// nearly-isotonic problem into a pure fusion problem.
Signal ni_shift(const Signal& y, const IncidenceMatrix& D, double lambda_ni);

/// Fused nearly-isotonic fit: solve the box dual, recover beta = y - D^T nu.
/// Solver non-convergence is reported through FitResult::dual, not thrown.
FitResult fit_fni(const Signal& y, const OrderGraph& g, double lambda_f, double lambda_ni,
                  const SolverOptions& opts = {});

/// Full three-penalty fit: soft threshold of the fused nearly-isotonic fit.
FitResult fit_flni(const Signal& y, const OrderGraph& g, const Penalties& p,
                   const SolverOptions& opts = {});

FitResult fit_nearly_isotonic(const Signal& y, const OrderGraph& g, double lambda_ni,
                              const SolverOptions& opts = {});
FitResult fit_fusion(const Signal& y, const OrderGraph& g, double lambda_f,
                     const SolverOptions& opts = {});
FitResult fit_fused_lasso(const Signal& y, const OrderGraph& g, double lambda_f, double lambda_l,
                          const SolverOptions& opts = {});

}  // namespace flni
