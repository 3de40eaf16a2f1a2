#pragma once

#include <string>
#include <vector>

namespace flni {

struct Edge {
    int source = 0;
    int target = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed graph encoding a partial order on vertices 0..n-1.
/// Edge (i, j) carries the constraint direction beta_i <= beta_j; edge order
/// is significant (edge e is row e of the incidence matrix). Immutable after
/// construction and safe to share across threads.
class OrderGraph {
public:
    /// Validates: n >= 1, no self-loops, no duplicate edges, ids in range.
    /// Throws std::invalid_argument naming the offending edge index.
    OrderGraph(int n_vertices, std::vector<Edge> edges);

    int n_vertices() const { return n_vertices_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    /// Undirected degree (in + out) maximum, used for step-size bounds.
    int max_degree() const;

    friend bool operator==(const OrderGraph&, const OrderGraph&) = default;

private:
    int n_vertices_;
    std::vector<Edge> edges_;
};

OrderGraph build_chain_graph(int n);
OrderGraph build_grid_graph(int n1, int n2);
OrderGraph from_edge_list(int n, std::vector<Edge> edges);

/// Oriented incidence matrix D: row e has +1 at source(e), -1 at target(e),
/// so (D beta)_e = beta_source - beta_target. Rows are stored sparsely as
/// (source, target) pairs in the graph's edge order.
class IncidenceMatrix {
public:
    explicit IncidenceMatrix(const OrderGraph& g);

    int n_rows() const { return static_cast<int>(rows_.size()); }
    int n_cols() const { return n_cols_; }
    int row_source(int e) const { return rows_[static_cast<std::size_t>(e)].source; }
    int row_target(int e) const { return rows_[static_cast<std::size_t>(e)].target; }

    /// D * beta: one signed difference per edge.
    std::vector<double> multiply(const std::vector<double>& beta) const;
    /// D^T * nu: signed accumulation per vertex.
    std::vector<double> multiply_transpose(const std::vector<double>& nu) const;

    /// Dense m x n copy, for small-scale checks.
    std::vector<std::vector<double>> dense() const;

    friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

private:
    int n_cols_;
    std::vector<Edge> rows_;
};

IncidenceMatrix incidence_matrix(const OrderGraph& g);

/// True iff the directed graph has no cycle (Kahn's topological sort).
bool validate_acyclic(const OrderGraph& g);

/// Parse `{"n": <int>, "edges": [[s, t], ...]}`.
OrderGraph order_graph_from_json(const std::string& json_text);

/// Parse a graph spec string: "chain:<n>" | "grid:<n1>x<n2>" | "edges:<path>"
/// (the latter reads an edge-list JSON file).
OrderGraph order_graph_from_spec(const std::string& spec);

}  // namespace flni
