#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "flni/errors.hpp"
#include "flni/estimators.hpp"
#include "flni/graph.hpp"
#include "flni/io.hpp"
#include "flni/model_select.hpp"
#include "flni/oracle.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDimension = 3;
constexpr int kExitCyclic = 4;
constexpr int kExitSigma = 5;

struct Options {
    std::string input;
    std::string graph_spec;
    std::string output;
    std::string grid_path;
    std::string beta_path;
    double lambda_f = 0.0;
    double lambda_l = 0.0;
    double lambda_ni = 0.0;
    double tol = 1e-8;
    long max_iter = 50000;
    double certify_tol = 1e-6;
    std::optional<double> sigma2;
    bool estimate_sigma2 = false;
    bool allow_cyclic = false;
    bool certify = false;
};

int worker_threads(std::size_t grid_size) {
    const unsigned hw = std::thread::hardware_concurrency();
    long threads = hw > 0 ? static_cast<long>(hw) : 1;
    if (const char* env = std::getenv("FLNI_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && cap >= 1) threads = std::min(threads, cap);
    }
    return static_cast<int>(std::min<long>(threads, static_cast<long>(grid_size)));
}

void emit(const Options& opt, const std::string& json) {
    if (opt.output.empty()) {
        std::cout << json;
    } else {
        flni::io::write_text_file(opt.output, json);
    }
}

// returns 0 when the graph may be used, otherwise the exit code
int check_graph(const Options& opt, const flni::OrderGraph& g, std::size_t signal_length) {
    if (!opt.allow_cyclic && !flni::validate_acyclic(g)) {
        std::cerr << "error: graph has a directed cycle; pass --allow-cyclic to fit anyway\n";
        return kExitCyclic;
    }
    if (static_cast<int>(signal_length) != g.n_vertices()) {
        std::cerr << "error: signal length " << signal_length << " does not match graph size "
                  << g.n_vertices() << "\n";
        return kExitDimension;
    }
    return 0;
}

int run_fit(const Options& opt) {
    const std::vector<double> y = flni::io::read_signal_csv(opt.input);
    const flni::OrderGraph g = flni::order_graph_from_spec(opt.graph_spec);
    if (int rc = check_graph(opt, g, y.size()); rc != 0) return rc;

    const flni::Penalties p{opt.lambda_f, opt.lambda_l, opt.lambda_ni};
    flni::SolverOptions sopts;
    sopts.tol = opt.tol;
    sopts.max_iter = opt.max_iter;
    const flni::FitResult fit = flni::fit_flni(y, g, p, sopts);
    if (!fit.dual.converged) {
        std::cerr << "warning: solver stopped at duality gap " << fit.dual.gap
                  << " without reaching the target\n";
    }
    if (opt.certify) {
        const auto cert = flni::oracle::certify_optimality(y, g, p, fit.beta, opt.certify_tol);
        emit(opt, flni::io::fit_result_to_json(fit, &cert));
    } else {
        emit(opt, flni::io::fit_result_to_json(fit));
    }
    return 0;
}

int run_path(const Options& opt) {
    const std::vector<double> y = flni::io::read_signal_csv(opt.input);
    const flni::OrderGraph g = flni::order_graph_from_spec(opt.graph_spec);
    if (int rc = check_graph(opt, g, y.size()); rc != 0) return rc;
    const std::vector<flni::Penalties> grid = flni::io::read_penalty_grid_csv(opt.grid_path);

    double sigma2 = 0.0;
    if (opt.sigma2.has_value()) {
        sigma2 = *opt.sigma2;
    } else if (opt.estimate_sigma2) {
        try {
            sigma2 = flni::estimate_sigma2_mad(y, g);
        } catch (const std::exception& e) {
            std::cerr << "error: cannot estimate sigma2: " << e.what() << "\n";
            return kExitSigma;
        }
        if (!(sigma2 > 0.0)) {
            std::cerr << "error: sigma2 estimate is degenerate (constant signal); pass --sigma2\n";
            return kExitSigma;
        }
    } else {
        std::cerr << "error: path needs --sigma2 or --estimate-sigma2\n";
        return kExitSigma;
    }

    flni::SolverOptions sopts;
    sopts.tol = opt.tol;
    sopts.max_iter = opt.max_iter;
    const flni::PathResult path =
        flni::sweep_path(y, g, grid, sigma2, sopts, worker_threads(grid.size()));
    emit(opt, flni::io::path_result_to_json(path));
    return 0;
}

int run_certify(const Options& opt) {
    const std::vector<double> y = flni::io::read_signal_csv(opt.input);
    const flni::OrderGraph g = flni::order_graph_from_spec(opt.graph_spec);
    if (int rc = check_graph(opt, g, y.size()); rc != 0) return rc;
    const std::vector<double> beta = flni::io::read_signal_csv(opt.beta_path);
    if (beta.size() != y.size()) {
        std::cerr << "error: beta length " << beta.size() << " does not match signal length "
                  << y.size() << "\n";
        return kExitDimension;
    }
    const flni::Penalties p{opt.lambda_f, opt.lambda_l, opt.lambda_ni};
    const auto cert = flni::oracle::certify_optimality(y, g, p, beta, opt.certify_tol);
    emit(opt, flni::io::certificate_to_json(cert));
    return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--input", opt.input, "signal CSV, one value per line")->required();
    cmd->add_option("--graph", opt.graph_spec, "chain:<n> | grid:<n1>x<n2> | edges:<path>")
        ->required();
    cmd->add_option("--output", opt.output, "output JSON path (stdout when omitted)");
    cmd->add_flag("--allow-cyclic", opt.allow_cyclic, "accept graphs with directed cycles");
}

void add_penalties(CLI::App* cmd, Options& opt) {
    cmd->add_option("--lambda-f", opt.lambda_f, "fusion penalty weight");
    cmd->add_option("--lambda-l", opt.lambda_l, "lasso penalty weight");
    cmd->add_option("--lambda-ni", opt.lambda_ni, "nearly-isotonic penalty weight");
}

void add_solver(CLI::App* cmd, Options& opt) {
    cmd->add_option("--tol", opt.tol, "relative duality-gap target");
    cmd->add_option("--max-iter", opt.max_iter, "solver iteration budget");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"fused lasso nearly-isotonic signal approximation on directed order graphs"};
    app.require_subcommand(1);

    CLI::App* fit = app.add_subcommand("fit", "fit one penalty triple and write the result JSON");
    add_common(fit, opt);
    add_penalties(fit, opt);
    add_solver(fit, opt);
    fit->add_flag("--certify", opt.certify, "attach a subgradient optimality certificate");

    CLI::App* path = app.add_subcommand("path", "fit a penalty grid and select by Cp");
    add_common(path, opt);
    add_solver(path, opt);
    path->add_option("--grid", opt.grid_path, "CSV of rows lambda_f,lambda_l,lambda_ni")
        ->required();
    path->add_option("--sigma2", opt.sigma2, "noise variance for the Cp statistic");
    path->add_flag("--estimate-sigma2", opt.estimate_sigma2,
                   "estimate sigma2 from the edge differences (MAD heuristic)");

    CLI::App* certify = app.add_subcommand("certify", "certify optimality of a fitted vector");
    add_common(certify, opt);
    add_penalties(certify, opt);
    certify->add_option("--beta", opt.beta_path, "fitted vector CSV, one value per line")
        ->required();
    certify->add_option("--tol", opt.certify_tol,
                        "sign-pattern tolerance relative to max(1, max|beta|)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return run_fit(opt);
        if (path->parsed()) return run_path(opt);
        if (certify->parsed()) return run_certify(opt);
    } catch (const flni::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
