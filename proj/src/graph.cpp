#include "flni/graph.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace flni {

OrderGraph::OrderGraph(int n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
    if (n_vertices_ < 1) {
        throw std::invalid_argument("graph needs at least one vertex, got n=" +
                                    std::to_string(n_vertices_));
    }
    std::map<std::pair<int, int>, std::size_t> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.source < 0 || ed.source >= n_vertices_ || ed.target < 0 ||
            ed.target >= n_vertices_) {
            throw std::invalid_argument(
                "edge " + std::to_string(e) + ": vertex id out of range [0," +
                std::to_string(n_vertices_) + "): (" + std::to_string(ed.source) + "," +
                std::to_string(ed.target) + ")");
        }
        if (ed.source == ed.target) {
            throw std::invalid_argument("edge " + std::to_string(e) + ": self-loop at vertex " +
                                        std::to_string(ed.source));
        }
        auto [it, inserted] = seen.emplace(std::make_pair(ed.source, ed.target), e);
        if (!inserted) {
            throw std::invalid_argument("edge " + std::to_string(e) + ": duplicate of edge " +
                                        std::to_string(it->second) + " (" +
                                        std::to_string(ed.source) + "," +
                                        std::to_string(ed.target) + ")");
        }
    }
}

int OrderGraph::max_degree() const {
    std::vector<int> deg(static_cast<std::size_t>(n_vertices_), 0);
    for (const Edge& e : edges_) {
        ++deg[static_cast<std::size_t>(e.source)];
        ++deg[static_cast<std::size_t>(e.target)];
    }
    int best = 0;
    for (int d : deg) best = std::max(best, d);
    return best;
}

OrderGraph build_chain_graph(int n) {
    if (n < 1) throw std::invalid_argument("chain graph needs n >= 1, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return OrderGraph(n, std::move(edges));
}

OrderGraph build_grid_graph(int n1, int n2) {
    if (n1 < 1 || n2 < 1) {
        throw std::invalid_argument("grid graph needs n1, n2 >= 1, got " + std::to_string(n1) +
                                    "x" + std::to_string(n2));
    }
    // Vertex (r, c) has id r*n2 + c. Within-row edges first, then
    // within-column edges, both in row-major order.
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n1 * (n2 - 1) + (n1 - 1) * n2));
    for (int r = 0; r < n1; ++r)
        for (int c = 0; c + 1 < n2; ++c) edges.push_back({r * n2 + c, r * n2 + c + 1});
    for (int r = 0; r + 1 < n1; ++r)
        for (int c = 0; c < n2; ++c) edges.push_back({r * n2 + c, (r + 1) * n2 + c});
    return OrderGraph(n1 * n2, std::move(edges));
}

OrderGraph from_edge_list(int n, std::vector<Edge> edges) {
    return OrderGraph(n, std::move(edges));
}

IncidenceMatrix::IncidenceMatrix(const OrderGraph& g)
    : n_cols_(g.n_vertices()), rows_(g.edges()) {}

std::vector<double> IncidenceMatrix::multiply(const std::vector<double>& beta) const {
    if (static_cast<int>(beta.size()) != n_cols_) {
        throw std::invalid_argument("incidence multiply: expected vector of length " +
                                    std::to_string(n_cols_) + ", got " +
                                    std::to_string(beta.size()));
    }
    std::vector<double> out(rows_.size());
    for (std::size_t e = 0; e < rows_.size(); ++e) {
        out[e] = beta[static_cast<std::size_t>(rows_[e].source)] -
                 beta[static_cast<std::size_t>(rows_[e].target)];
    }
    return out;
}

std::vector<double> IncidenceMatrix::multiply_transpose(const std::vector<double>& nu) const {
    if (nu.size() != rows_.size()) {
        throw std::invalid_argument("incidence transpose multiply: expected vector of length " +
                                    std::to_string(rows_.size()) + ", got " +
                                    std::to_string(nu.size()));
    }
    std::vector<double> out(static_cast<std::size_t>(n_cols_), 0.0);
    for (std::size_t e = 0; e < rows_.size(); ++e) {
        out[static_cast<std::size_t>(rows_[e].source)] += nu[e];
        out[static_cast<std::size_t>(rows_[e].target)] -= nu[e];
    }
    return out;
}

std::vector<std::vector<double>> IncidenceMatrix::dense() const {
    std::vector<std::vector<double>> m(rows_.size(),
                                       std::vector<double>(static_cast<std::size_t>(n_cols_), 0.0));
    for (std::size_t e = 0; e < rows_.size(); ++e) {
        m[e][static_cast<std::size_t>(rows_[e].source)] = 1.0;
        m[e][static_cast<std::size_t>(rows_[e].target)] = -1.0;
    }
    return m;
}

IncidenceMatrix incidence_matrix(const OrderGraph& g) { return IncidenceMatrix(g); }

bool validate_acyclic(const OrderGraph& g) {
    const int n = g.n_vertices();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
        ++indeg[static_cast<std::size_t>(e.target)];
        out[static_cast<std::size_t>(e.source)].push_back(e.target);
    }
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    std::size_t head = 0;
    int visited = 0;
    while (head < queue.size()) {
        int v = queue[head++];
        ++visited;
        for (int w : out[static_cast<std::size_t>(v)]) {
            if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
        }
    }
    return visited == n;
}

OrderGraph order_graph_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
        throw std::invalid_argument("edge-list JSON must be {\"n\": <int>, \"edges\": [[s,t],...]}");
    }
    if (!j["n"].is_number_integer()) throw std::invalid_argument("edge-list JSON: \"n\" must be an integer");
    const int n = j["n"].get<int>();
    if (!j["edges"].is_array()) throw std::invalid_argument("edge-list JSON: \"edges\" must be an array");
    std::vector<Edge> edges;
    edges.reserve(j["edges"].size());
    for (const auto& item : j["edges"]) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
            !item[1].is_number_integer()) {
            throw std::invalid_argument("edge-list JSON: each edge must be an integer pair [s,t]");
        }
        edges.push_back({item[0].get<int>(), item[1].get<int>()});
    }
    return OrderGraph(n, std::move(edges));
}

namespace {

int parse_int_strict(std::string_view s, const std::string& context) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument(context + ": expected an integer, got '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

OrderGraph order_graph_from_spec(const std::string& spec) {
    if (spec.rfind("chain:", 0) == 0) {
        return build_chain_graph(parse_int_strict(std::string_view(spec).substr(6), "chain spec"));
    }
    if (spec.rfind("grid:", 0) == 0) {
        std::string_view rest = std::string_view(spec).substr(5);
        std::size_t x = rest.find('x');
        if (x == std::string_view::npos) {
            throw std::invalid_argument("grid spec must be grid:<n1>x<n2>, got '" + spec + "'");
        }
        int n1 = parse_int_strict(rest.substr(0, x), "grid spec");
        int n2 = parse_int_strict(rest.substr(x + 1), "grid spec");
        return build_grid_graph(n1, n2);
    }
    if (spec.rfind("edges:", 0) == 0) {
        const std::string path = spec.substr(6);
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open edge-list file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return order_graph_from_json(buf.str());
    }
    throw std::invalid_argument("unknown graph spec '" + spec +
                                "' (expected chain:<n>, grid:<n1>x<n2>, or edges:<path>)");
}

}  // namespace flni
