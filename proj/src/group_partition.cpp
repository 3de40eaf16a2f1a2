#include "flni/group_partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "flni/errors.hpp"

namespace flni {

int GroupPartition::n_nonzero_groups() const {
    int k = 0;
    for (bool z : is_zero)
        if (!z) ++k;
    return k;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

GroupPartition fused_groups(const std::vector<double>& beta, const OrderGraph& g, double tol) {
    if (static_cast<int>(beta.size()) != g.n_vertices()) {
        throw DimensionError("fused_groups: beta has length " + std::to_string(beta.size()) +
                             ", graph has " + std::to_string(g.n_vertices()) + " vertices");
    }
    if (!(tol >= 0.0) || !std::isfinite(tol)) {
        throw std::invalid_argument("fused_groups: tolerance must be finite and >= 0");
    }
    double scale = 1.0;
    for (double b : beta) scale = std::max(scale, std::abs(b));
    const double threshold = tol * scale;

    const int n = g.n_vertices();
    UnionFind uf(n);
    for (const Edge& e : g.edges()) {
        if (std::abs(beta[static_cast<std::size_t>(e.source)] -
                     beta[static_cast<std::size_t>(e.target)]) <= threshold) {
            uf.unite(e.source, e.target);
        }
    }

    // roots are the smallest member of each component, so ordering the groups
    // by root id is ordering by smallest member
    std::vector<int> root_to_group(static_cast<std::size_t>(n), -1);
    GroupPartition part;
    part.equality_tolerance = tol;
    for (int v = 0; v < n; ++v) {
        const int r = uf.find(v);
        if (root_to_group[static_cast<std::size_t>(r)] < 0) {
            root_to_group[static_cast<std::size_t>(r)] = static_cast<int>(part.groups.size());
            part.groups.emplace_back();
            part.is_zero.push_back(true);
        }
        const std::size_t gi = static_cast<std::size_t>(root_to_group[static_cast<std::size_t>(r)]);
        part.groups[gi].push_back(v);
        if (std::abs(beta[static_cast<std::size_t>(v)]) > threshold) part.is_zero[gi] = false;
    }
    return part;
}

}  // namespace flni
