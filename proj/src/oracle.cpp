#include "flni/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "flni/errors.hpp"

namespace flni::oracle {

namespace {

void require_lengths(std::size_t got, std::size_t want, const char* where) {
    if (got != want) {
        throw DimensionError(std::string(where) + ": expected length " + std::to_string(want) +
                             ", got " + std::to_string(got));
    }
}

double primal_value(const std::vector<double>& y, const OrderGraph& g, const Penalties& p,
                    const std::vector<double>& beta) {
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

// In-place lower Cholesky factor of a dense SPD matrix.
void cholesky_factor(std::vector<std::vector<double>>& h) {
    const std::size_t n = h.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = h[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= h[j][k] * h[j][k];
        if (d <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        h[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = h[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= h[i][k] * h[j][k];
            h[i][j] = v / h[j][j];
        }
    }
}

std::vector<double> cholesky_solve(const std::vector<std::vector<double>>& l,
                                   std::vector<double> rhs) {
    const std::size_t n = l.size();
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i][k] * rhs[k];
        rhs[i] = v / l[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double v = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) v -= l[k][i] * rhs[k];
        rhs[i] = v / l[i][i];
    }
    return rhs;
}

double soft(double w, double k) {
    if (w > k) return w - k;
    if (w < -k) return w + k;
    return 0.0;
}

// prox of lambda_f*|z| + lambda_ni*(z)_+ with parameter 1/rho
double asymmetric_soft(double w, double lower_weight, double upper_weight) {
    if (w > upper_weight) return w - upper_weight;
    if (w < -lower_weight) return w + lower_weight;
    return 0.0;
}

}  // namespace

std::vector<double> pava_chain(const std::vector<double>& y) {
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("pava_chain: non-finite entry");
    }
    const std::size_t n = y.size();
    std::vector<double> value;
    std::vector<double> weight;
    std::vector<std::size_t> count;
    value.reserve(n);
    weight.reserve(n);
    count.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        value.push_back(y[i]);
        weight.push_back(1.0);
        count.push_back(1);
        while (value.size() >= 2 && value[value.size() - 2] > value.back()) {
            const double w = weight[weight.size() - 2] + weight.back();
            const double v = (weight[weight.size() - 2] * value[value.size() - 2] +
                              weight.back() * value.back()) /
                             w;
            value.pop_back();
            weight.pop_back();
            const std::size_t c = count.back();
            count.pop_back();
            value.back() = v;
            weight.back() = w;
            count.back() += c;
        }
    }
    std::vector<double> fitted;
    fitted.reserve(n);
    for (std::size_t b = 0; b < value.size(); ++b) {
        for (std::size_t k = 0; k < count[b]; ++k) fitted.push_back(value[b]);
    }
    return fitted;
}

std::vector<double> brute_force_fit(const std::vector<double>& y, const OrderGraph& g,
                                    const Penalties& p, double precision) {
    require_lengths(y.size(), static_cast<std::size_t>(g.n_vertices()), "brute_force_fit");
    p.validate();
    if (!(precision > 0.0)) throw std::invalid_argument("brute_force_fit: precision must be > 0");

    const std::size_t n = y.size();
    const std::size_t m = static_cast<std::size_t>(g.n_edges());
    const double rho = 1.0;

    std::vector<std::vector<double>> chol(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) chol[i][i] = 1.0 + rho;
    for (const Edge& e : g.edges()) {
        const std::size_t a = static_cast<std::size_t>(e.source);
        const std::size_t b = static_cast<std::size_t>(e.target);
        chol[a][a] += rho;
        chol[b][b] += rho;
        chol[a][b] -= rho;
        chol[b][a] -= rho;
    }
    cholesky_factor(chol);

    double y_scale = 1.0;
    for (double v : y) y_scale = std::max(y_scale, std::abs(v));
    const double res_tol = 1e-12 * y_scale;

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    const std::vector<std::vector<double>> starts = {
        y, std::vector<double>(n, 0.0), std::vector<double>(n, mean)};

    std::vector<double> best;
    double best_value = std::numeric_limits<double>::infinity();

    for (const std::vector<double>& start : starts) {
        std::vector<double> beta = start;
        std::vector<double> vb = beta;
        std::vector<double> ub(n, 0.0);
        std::vector<double> vz(m), uz(m, 0.0), zb(m);
        for (std::size_t e = 0; e < m; ++e) {
            vz[e] = beta[static_cast<std::size_t>(g.edge(static_cast<int>(e)).source)] -
                    beta[static_cast<std::size_t>(g.edge(static_cast<int>(e)).target)];
        }

        double local_best = primal_value(y, g, p, beta);
        std::vector<double> local_best_beta = beta;
        long last_improve = 0;

        const long max_iter = 100000;
        for (long k = 1; k <= max_iter; ++k) {
            std::vector<double> rhs(n);
            for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] + rho * (vb[i] - ub[i]);
            for (std::size_t e = 0; e < m; ++e) {
                const Edge& ed = g.edge(static_cast<int>(e));
                const double w = rho * (vz[e] - uz[e]);
                rhs[static_cast<std::size_t>(ed.source)] += w;
                rhs[static_cast<std::size_t>(ed.target)] -= w;
            }
            beta = cholesky_solve(chol, std::move(rhs));

            for (std::size_t e = 0; e < m; ++e) {
                const Edge& ed = g.edge(static_cast<int>(e));
                zb[e] = beta[static_cast<std::size_t>(ed.source)] -
                        beta[static_cast<std::size_t>(ed.target)];
            }

            double prim_res = 0.0;
            double dual_res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = beta[i] + ub[i];
                const double v_new = soft(w, p.lambda_l / rho);
                dual_res = std::max(dual_res, rho * std::abs(v_new - vb[i]));
                vb[i] = v_new;
                ub[i] += beta[i] - vb[i];
                prim_res = std::max(prim_res, std::abs(beta[i] - vb[i]));
            }
            for (std::size_t e = 0; e < m; ++e) {
                const double w = zb[e] + uz[e];
                const double v_new =
                    asymmetric_soft(w, p.lambda_f / rho, (p.lambda_f + p.lambda_ni) / rho);
                dual_res = std::max(dual_res, rho * std::abs(v_new - vz[e]));
                vz[e] = v_new;
                uz[e] += zb[e] - vz[e];
                prim_res = std::max(prim_res, std::abs(zb[e] - vz[e]));
            }

            const double value = primal_value(y, g, p, beta);
            if (value < local_best - precision * 1e-3) last_improve = k;
            if (value < local_best) {
                local_best = value;
                local_best_beta = beta;
            }

            if (prim_res <= res_tol && dual_res <= res_tol && k - last_improve >= 25) break;
            if (k - last_improve >= 1000) break;  // objective stable within precision
        }

        if (local_best < best_value) {
            best_value = local_best;
            best = local_best_beta;
        }
    }
    return best;
}

LinearProgramResult simplex_min(const std::vector<double>& c,
                                const std::vector<std::vector<double>>& a,
                                const std::vector<double>& b) {
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    if (b.size() != m) throw std::invalid_argument("simplex_min: |b| != rows of A");
    for (const auto& row : a) {
        if (row.size() != n) throw std::invalid_argument("simplex_min: ragged constraint matrix");
    }
    constexpr double eps = 1e-9;

    // columns: n originals, m slacks, then one artificial per flipped row
    std::size_t n_art = 0;
    for (double bi : b)
        if (bi < 0.0) ++n_art;
    const std::size_t first_art = n + m;
    const std::size_t n_cols = first_art + n_art;

    std::vector<std::vector<double>> tab(m, std::vector<double>(n_cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    std::size_t art = first_art;
    for (std::size_t i = 0; i < m; ++i) {
        const double sgn = (b[i] < 0.0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = sgn * a[i][j];
        tab[i][n + i] = sgn;
        tab[i][n_cols] = sgn * b[i];
        if (sgn < 0.0) {
            tab[i][art] = 1.0;
            basis[i] = art++;
        } else {
            basis[i] = n + i;
        }
    }

    auto pivot = [&](std::vector<double>& z, std::size_t r, std::size_t col) {
        const double piv = tab[r][col];
        for (double& v : tab[r]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || std::abs(tab[i][col]) < 1e-300) continue;
            const double f = tab[i][col];
            for (std::size_t j = 0; j <= n_cols; ++j) tab[i][j] -= f * tab[r][j];
        }
        const double f = z[col];
        if (std::abs(f) > 0.0) {
            for (std::size_t j = 0; j <= n_cols; ++j) z[j] -= f * tab[r][j];
        }
        basis[r] = col;
    };

    // Bland's rule: smallest eligible entering column, smallest basis id on ties.
    auto run = [&](std::vector<double>& z, std::size_t col_limit) {
        for (long it = 0; it < 100000; ++it) {
            std::size_t enter = n_cols;
            for (std::size_t j = 0; j < col_limit; ++j) {
                if (z[j] < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter == n_cols) return;
            std::size_t leave = m;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (tab[i][enter] > eps) {
                    const double ratio = tab[i][n_cols] / tab[i][enter];
                    if (leave == m || ratio < best_ratio - 1e-12 ||
                        (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave == m) throw std::runtime_error("simplex_min: unbounded program");
            pivot(z, leave, enter);
        }
        throw std::runtime_error("simplex_min: iteration limit reached");
    };

    LinearProgramResult result;
    if (n_art > 0) {
        std::vector<double> z(n_cols + 1, 0.0);
        for (std::size_t j = first_art; j < n_cols; ++j) z[j] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] >= first_art) {
                for (std::size_t j = 0; j <= n_cols; ++j) z[j] -= tab[i][j];
            }
        }
        run(z, n_cols);
        if (-z[n_cols] > 1e-7) {
            result.feasible = false;
            return result;
        }
        // drive leftover artificials out of the basis (their rows sit at zero)
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < first_art) continue;
            std::size_t j = first_art;
            for (std::size_t cand = 0; cand < first_art; ++cand) {
                if (std::abs(tab[i][cand]) > eps) {
                    j = cand;
                    break;
                }
            }
            if (j < first_art) {
                std::vector<double> dummy(n_cols + 1, 0.0);
                pivot(dummy, i, j);
            }
        }
    }

    std::vector<double> z(n_cols + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) z[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n && std::abs(z[basis[i]]) > 0.0) {
            const double f = z[basis[i]];
            for (std::size_t j = 0; j <= n_cols; ++j) z[j] -= f * tab[i][j];
        }
    }
    run(z, first_art);  // artificial columns may not re-enter

    result.feasible = true;
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) result.x[basis[i]] = tab[i][n_cols];
    }
    result.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
    return result;
}

MinimaxResult minimize_max_abs_affine(const std::vector<double>& base,
                                      const std::vector<std::vector<double>>& c_rows,
                                      const std::vector<double>& lo,
                                      const std::vector<double>& hi) {
    const std::size_t n = base.size();
    const std::size_t p = lo.size();
    if (hi.size() != p) throw std::invalid_argument("minimize_max_abs_affine: |lo| != |hi|");
    for (const auto& row : c_rows) {
        if (row.size() != p) throw std::invalid_argument("minimize_max_abs_affine: ragged C");
    }
    if (c_rows.size() != n) throw std::invalid_argument("minimize_max_abs_affine: |C| != |base|");

    MinimaxResult out;
    if (p == 0) {
        double r = 0.0;
        for (double v : base) r = std::max(r, std::abs(v));
        out.value = r;
        return out;
    }

    // shift x = lo + xt, xt in [0, hi - lo]; minimize r with |b0 + C xt| <= r
    std::vector<double> b0 = base;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) b0[i] += c_rows[i][j] * lo[j];
    }

    const std::size_t n_vars = p + 1;  // xt, r
    std::vector<double> cost(n_vars, 0.0);
    cost[p] = 1.0;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    a.reserve(2 * n + p);
    b.reserve(2 * n + p);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n_vars, 0.0);
        for (std::size_t j = 0; j < p; ++j) row[j] = c_rows[i][j];
        row[p] = -1.0;
        a.push_back(row);
        b.push_back(-b0[i]);
        for (std::size_t j = 0; j < p; ++j) row[j] = -c_rows[i][j];
        row[p] = -1.0;
        a.push_back(row);
        b.push_back(b0[i]);
    }
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> row(n_vars, 0.0);
        row[j] = 1.0;
        a.push_back(row);
        b.push_back(hi[j] - lo[j]);
    }

    LinearProgramResult lp = simplex_min(cost, a, b);
    if (!lp.feasible) throw std::runtime_error("minimize_max_abs_affine: infeasible LP");
    out.x.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) out.x[j] = lo[j] + lp.x[j];
    out.value = lp.x[p];
    return out;
}

SubgradientCertificate certify_optimality(const std::vector<double>& y, const OrderGraph& g,
                                          const Penalties& p, const std::vector<double>& beta,
                                          double tol) {
    require_lengths(y.size(), static_cast<std::size_t>(g.n_vertices()), "certify_optimality");
    require_lengths(beta.size(), static_cast<std::size_t>(g.n_vertices()), "certify_optimality");
    p.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("certify_optimality: tol must be > 0");

    const std::size_t n = y.size();
    const std::size_t m = static_cast<std::size_t>(g.n_edges());
    double scale = 1.0;
    for (double v : beta) scale = std::max(scale, std::abs(v));
    const double threshold = tol * scale;

    SubgradientCertificate cert;
    cert.q.assign(m, 0.5);
    cert.t.assign(m, 0.0);
    cert.s.assign(n, 0.0);
    std::vector<bool> edge_free(m, false);
    std::vector<bool> vertex_free(n, false);

    for (std::size_t e = 0; e < m; ++e) {
        const Edge& ed = g.edge(static_cast<int>(e));
        const double z =
            beta[static_cast<std::size_t>(ed.source)] - beta[static_cast<std::size_t>(ed.target)];
        if (z > threshold) {
            cert.q[e] = 1.0;
            cert.t[e] = 1.0;
        } else if (z < -threshold) {
            cert.q[e] = 0.0;
            cert.t[e] = -1.0;
        } else {
            edge_free[e] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i] > threshold) {
            cert.s[i] = 1.0;
        } else if (beta[i] < -threshold) {
            cert.s[i] = -1.0;
        } else {
            vertex_free[i] = true;
        }
    }

    // stationarity with the fixed values; free contributions enter as columns
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) {
        base[i] = beta[i] - y[i] + (vertex_free[i] ? 0.0 : p.lambda_l * cert.s[i]);
    }
    for (std::size_t e = 0; e < m; ++e) {
        if (edge_free[e]) continue;
        const Edge& ed = g.edge(static_cast<int>(e));
        const double w = p.lambda_ni * cert.q[e] + p.lambda_f * cert.t[e];
        base[static_cast<std::size_t>(ed.source)] += w;
        base[static_cast<std::size_t>(ed.target)] -= w;
    }

    struct FreeVar {
        enum Kind { Q, T, S } kind;
        std::size_t index;
    };
    std::vector<FreeVar> vars;
    std::vector<double> lo;
    std::vector<double> hi;
    for (std::size_t e = 0; e < m; ++e) {
        if (!edge_free[e]) continue;
        if (p.lambda_ni > 0.0) {
            vars.push_back({FreeVar::Q, e});
            lo.push_back(0.0);
            hi.push_back(1.0);
        }
        if (p.lambda_f > 0.0) {
            vars.push_back({FreeVar::T, e});
            lo.push_back(-1.0);
            hi.push_back(1.0);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (vertex_free[i] && p.lambda_l > 0.0) {
            vars.push_back({FreeVar::S, i});
            lo.push_back(-1.0);
            hi.push_back(1.0);
        }
    }

    std::vector<std::vector<double>> cols(n, std::vector<double>(vars.size(), 0.0));
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const FreeVar& v = vars[j];
        if (v.kind == FreeVar::S) {
            cols[v.index][j] = p.lambda_l;
        } else {
            const Edge& ed = g.edge(static_cast<int>(v.index));
            const double w = (v.kind == FreeVar::Q) ? p.lambda_ni : p.lambda_f;
            cols[static_cast<std::size_t>(ed.source)][j] = w;
            cols[static_cast<std::size_t>(ed.target)][j] = -w;
        }
    }

    MinimaxResult mm = minimize_max_abs_affine(base, cols, lo, hi);
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const FreeVar& v = vars[j];
        switch (v.kind) {
            case FreeVar::Q: cert.q[v.index] = std::clamp(mm.x[j], 0.0, 1.0); break;
            case FreeVar::T: cert.t[v.index] = std::clamp(mm.x[j], -1.0, 1.0); break;
            case FreeVar::S: cert.s[v.index] = std::clamp(mm.x[j], -1.0, 1.0); break;
        }
    }

    // recompute the residual from the assembled certificate
    std::vector<double> station(n);
    for (std::size_t i = 0; i < n; ++i) {
        station[i] = beta[i] - y[i] + p.lambda_l * cert.s[i];
    }
    for (std::size_t e = 0; e < m; ++e) {
        const Edge& ed = g.edge(static_cast<int>(e));
        const double w = p.lambda_ni * cert.q[e] + p.lambda_f * cert.t[e];
        station[static_cast<std::size_t>(ed.source)] += w;
        station[static_cast<std::size_t>(ed.target)] -= w;
    }
    double residual = 0.0;
    for (double v : station) residual = std::max(residual, std::abs(v));
    cert.residual = residual;
    return cert;
}

}  // namespace flni::oracle
