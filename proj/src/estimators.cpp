#include "flni/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "flni/errors.hpp"

namespace flni {

namespace {

void require_signal(const Signal& y, const OrderGraph& g, const char* where) {
    if (static_cast<int>(y.size()) != g.n_vertices()) {
        throw DimensionError(std::string(where) + ": signal has length " +
                             std::to_string(y.size()) + ", graph has " +
                             std::to_string(g.n_vertices()) + " vertices");
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(where) + ": signal contains a non-finite entry");
        }
    }
}

}  // namespace

Signal positive_part(Signal x) {
    for (double& v : x) v = std::max(v, 0.0);
    return x;
}

double objective(const Signal& y, const Signal& beta, const OrderGraph& g, const Penalties& p) {
    require_signal(y, g, "objective");
    require_signal(beta, g, "objective");
    p.validate();
    double fit = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - beta[i];
        fit += r * r;
        l1 += std::abs(beta[i]);
    }
    double fuse = 0.0;
    double viol = 0.0;
    for (const Edge& e : g.edges()) {
        const double z =
            beta[static_cast<std::size_t>(e.source)] - beta[static_cast<std::size_t>(e.target)];
        fuse += std::abs(z);
        viol += std::max(z, 0.0);
    }
    return 0.5 * fit + p.lambda_f * fuse + p.lambda_l * l1 + p.lambda_ni * viol;
}

Signal soft_threshold(Signal beta, double lambda_l) {
    if (!(lambda_l >= 0.0) || !std::isfinite(lambda_l)) {
        throw std::invalid_argument("soft_threshold: lambda_l must be finite and >= 0");
    }
    for (double& b : beta) {
        if (b > lambda_l) {
            b -= lambda_l;
        } else if (b < -lambda_l) {
            b += lambda_l;
        } else {
            b = 0.0;
        }
    }
    return beta;
}

Signal ni_shift(const Signal& y, const IncidenceMatrix& D, double lambda_ni) {
    if (static_cast<int>(y.size()) != D.n_cols()) {
        throw DimensionError("ni_shift: signal has length " + std::to_string(y.size()) +
                             ", incidence matrix has " + std::to_string(D.n_cols()) + " columns");
    }
    Signal shifted = y;
    const double half = 0.5 * lambda_ni;
    for (int e = 0; e < D.n_rows(); ++e) {
        shifted[static_cast<std::size_t>(D.row_source(e))] -= half;
        shifted[static_cast<std::size_t>(D.row_target(e))] += half;
    }
    return shifted;
}

FitResult fit_fni(const Signal& y, const OrderGraph& g, double lambda_f, double lambda_ni,
                  const SolverOptions& opts) {
    require_signal(y, g, "fit_fni");
    const Penalties p{lambda_f, 0.0, lambda_ni};
    p.validate();
    const IncidenceMatrix D = incidence_matrix(g);
    FitResult fit;
    fit.dual = solve_dual(y, D, lambda_f, lambda_ni, opts);
    fit.beta = recover_primal(y, D, fit.dual.nu);
    fit.penalties = p;
    fit.objective = objective(y, fit.beta, g, p);
    fit.groups = fused_groups(fit.beta, g);
    fit.df = fit.groups.n_groups();
    return fit;
}

FitResult fit_flni(const Signal& y, const OrderGraph& g, const Penalties& p,
                   const SolverOptions& opts) {
    p.validate();
    FitResult fit = fit_fni(y, g, p.lambda_f, p.lambda_ni, opts);
    fit.beta = soft_threshold(std::move(fit.beta), p.lambda_l);
    fit.penalties = p;
    fit.objective = objective(y, fit.beta, g, p);
    fit.groups = fused_groups(fit.beta, g);
    fit.df = fit.groups.n_nonzero_groups();
    return fit;
}

FitResult fit_nearly_isotonic(const Signal& y, const OrderGraph& g, double lambda_ni,
                              const SolverOptions& opts) {
    return fit_fni(y, g, 0.0, lambda_ni, opts);
}

FitResult fit_fusion(const Signal& y, const OrderGraph& g, double lambda_f,
                     const SolverOptions& opts) {
    return fit_fni(y, g, lambda_f, 0.0, opts);
}

FitResult fit_fused_lasso(const Signal& y, const OrderGraph& g, double lambda_f, double lambda_l,
                          const SolverOptions& opts) {
    return fit_flni(y, g, Penalties{lambda_f, lambda_l, 0.0}, opts);
}

}  // namespace flni
