#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphzip/errors.hpp"

namespace graphzip {

// Unweighted, undirected, simple graph over dense 0-based vertex ids.
// Adjacency lists are kept sorted; self loops and duplicate edges are ignored.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(n) {
        if (n < 0) throw domain_error("graph: negative vertex count");
    }

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    std::int64_t edge_count() const { return edge_count_; }

    bool has_edge(int u, int v) const;

    // returns false if the edge was a self loop or already present
    bool add_edge(int u, int v);

    // returns false if the edge was not present
    bool remove_edge(int u, int v);

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    std::vector<std::pair<int, int>> edges() const;

    bool operator==(const Graph& other) const = default;

private:
    std::vector<std::vector<int>> adj_;
    std::int64_t edge_count_ = 0;
};

// counts[k] = number of vertices of degree k, k = 0..n-1
struct DegreeDistribution {
    std::vector<std::int64_t> counts;
    std::int64_t total() const;
};

DegreeDistribution degree_histogram(const Graph& g);

struct LoadNotes {
    std::int64_t dropped_self_loops = 0;
    std::int64_t dropped_duplicates = 0;
    bool compacted_ids = false;
};

// Plain-text edge list: one "u v" pair per line, '#'/'%' comments and blank
// lines skipped, extra trailing tokens on a line ignored (matrix-market style
// size lines degrade to a dropped self loop). Ids with gaps are compacted to
// a dense 0-based range in sorted id order.
Graph load_edge_list(std::string_view text, LoadNotes* notes = nullptr);
Graph load_edge_list_file(const std::string& path, LoadNotes* notes = nullptr);

std::string to_edge_list(const Graph& g);

// deterministic generators; same (params, seed) gives the identical edge set
Graph make_empty(int n);
Graph make_complete(int n);
Graph generate_er(int n, double p, std::uint64_t seed);
Graph generate_ba(int n, int m, std::uint64_t seed);
Graph generate_ws(int n, int k, double beta, std::uint64_t seed);

// "er:n=..,p=..", "ba:n=..,m=..", "ws:n=..,k=..,beta=..", "complete:n=..",
// "empty:n=.." -- used by the CLI gen/benchmark commands
Graph generate_from_string(const std::string& model, std::uint64_t seed);

// exact isomorphism test by backtracking; only for n <= 12
bool is_isomorphic_small(const Graph& g1, const Graph& g2);

// edge (i,j) iff |omega[i*p+j]| > tol, i != j; omega is a row-major p x p
// symmetric matrix
Graph graph_from_precision(const double* omega, int p, double tol = 1e-8);

} // namespace graphzip
