#include "flni/model_select.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "flni/errors.hpp"

namespace flni {

int df_fni(const FitResult& fit) {
    if (fit.penalties.lambda_l > 0.0) {
        throw std::invalid_argument(
            "df_fni: fit was produced with lambda_l > 0; use df_flni for thresholded fits");
    }
    return fit.groups.n_groups();
}

int df_flni(const FitResult& fit) { return fit.groups.n_nonzero_groups(); }

double cp_statistic(const Signal& y, const FitResult& fit, double sigma2) {
    if (y.size() != fit.beta.size()) {
        throw DimensionError("cp_statistic: y has length " + std::to_string(y.size()) +
                             ", fit has length " + std::to_string(fit.beta.size()));
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("cp_statistic: sigma2 must be positive and finite");
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - fit.beta[i];
        rss += r * r;
    }
    const double n = static_cast<double>(y.size());
    return rss - n * sigma2 + 2.0 * sigma2 * static_cast<double>(df_flni(fit));
}

PathResult sweep_path(const Signal& y, const OrderGraph& g, const std::vector<Penalties>& grid,
                      double sigma2, const SolverOptions& opts, int n_threads) {
    if (grid.empty()) throw std::invalid_argument("sweep_path: penalty grid is empty");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("sweep_path: sigma2 must be positive and finite");
    }
    for (const Penalties& p : grid) p.validate();

    PathResult path;
    path.sigma2 = sigma2;
    path.entries.resize(grid.size());

    auto fit_one = [&](std::size_t i) {
        PathEntry& entry = path.entries[i];
        entry.penalties = grid[i];
        entry.fit = fit_flni(y, g, grid[i], opts);
        entry.cp = cp_statistic(y, entry.fit, sigma2);
    };

    const int workers = std::min<int>(std::max(n_threads, 1), static_cast<int>(grid.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) fit_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= grid.size()) break;
                try {
                    fit_one(i);
                } catch (...) {
                    std::lock_guard guard(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    path.best_index = 0;
    for (std::size_t i = 1; i < path.entries.size(); ++i) {
        if (path.entries[i].cp < path.entries[static_cast<std::size_t>(path.best_index)].cp) {
            path.best_index = static_cast<int>(i);
        }
    }
    return path;
}

double estimate_sigma2_mad(const Signal& y, const OrderGraph& g) {
    if (g.n_edges() < 1) {
        throw std::invalid_argument("estimate_sigma2_mad: graph has no edges");
    }
    if (static_cast<int>(y.size()) != g.n_vertices()) {
        throw DimensionError("estimate_sigma2_mad: signal has length " + std::to_string(y.size()) +
                             ", graph has " + std::to_string(g.n_vertices()) + " vertices");
    }
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(g.n_edges()));
    for (const Edge& e : g.edges()) {
        diffs.push_back(std::abs(y[static_cast<std::size_t>(e.source)] -
                                 y[static_cast<std::size_t>(e.target)]));
    }
    std::sort(diffs.begin(), diffs.end());
    const std::size_t m = diffs.size();
    const double median =
        (m % 2 == 1) ? diffs[m / 2] : 0.5 * (diffs[m / 2 - 1] + diffs[m / 2]);
    const double sigma = median / (std::sqrt(2.0) * 0.6745);
    return sigma * sigma;
}

}  // namespace flni
