#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "graphzip/graph.hpp"

namespace graphzip {

// Node address in the cardinality tree: [level, index]. Indices are 1-based
// and count existing children of the level left to right, so left children
// carry odd indices and right children even ones. The root is [0, 1].
struct NodeRef {
    int level = 0;
    int index = 1;
    bool is_left() const { return index % 2 == 1; }
    bool operator==(const NodeRef&) const = default;
};

// Rooted binary tree of subset cardinalities. Level 0 is the root holding n.
// Each later level stores the children of the previous level's split nodes,
// pairwise: positions 2t and 2t+1 are the left/right children of split
// parent t, whose position at the previous level is parent_of_pair[t].
// A node is split only while it still holds vertices after the level's pick
// is removed, so the residual of the first nonempty node is its value minus
// one and empty nodes never have children.
class CardinalityTree {
public:
    struct Level {
        std::vector<std::int32_t> cards;
        std::vector<std::int32_t> parent_of_pair;
    };

    int n = 0;                   // |[0,1]|
    std::vector<Level> levels;   // levels[0].cards = {n}

    int level_count() const { return static_cast<int>(levels.size()); }
    std::int32_t card(const NodeRef& node) const { return levels[node.level].cards[node.index - 1]; }
    int node_count(int level) const { return static_cast<int>(levels[level].cards.size()); }

    // 0-based position of the first nonempty node; by construction 0 or 1
    int first_nonempty(int level) const;

    NodeRef parent(const NodeRef& node) const;

    // value minus one for the first nonempty node, the value otherwise;
    // the number of vertices handed to this node's children
    std::int32_t residual(int level, int pos) const;

    bool operator==(const CardinalityTree&) const = default;
};

// vertex-selection policy inside the first nonempty node
struct VertexPicker {
    // members are the node's current vertices in construction order with the
    // smallest label first; returns an index into members
    std::function<std::size_t(const std::vector<int>& members)> pick;

    static VertexPicker min_index();
    static VertexPicker random(std::uint64_t seed);
};

struct TreeResult {
    CardinalityTree tree;
    std::vector<int> pick_order;  // pick_order[l-1] = vertex removed to build level l
};

TreeResult graph_to_tree(const Graph& g, const VertexPicker& picker = VertexPicker::min_index());

// Materializes a graph whose transform reproduces t exactly: the vertex
// picked at level l gets label l-1, the one leftover vertex label n-1.
Graph tree_to_graph(const CardinalityTree& t);

// throws domain_error on any violated tree invariant
void validate_tree(const CardinalityTree& t);

// indented per-level text dump for fixtures: "0: 7 | 1: 3L 3R | ..."
std::string dump_tree(const CardinalityTree& t);

// Levels where the root paths of the node and of the same level's first
// nonempty node both (ci) or either (i) pass through a left node. Proxies
// for shared adjacency with already-picked vertices.
std::vector<int> ci_levels(const CardinalityTree& t, const NodeRef& node);
std::vector<int> i_levels(const CardinalityTree& t, const NodeRef& node);

enum class MotifClass { None, FourCycle, DoubleTriangle, FourClique };

// 4-vertex motif context for the left node being coded, from the already
// known part of the tree only. Priority: 4-clique, then double-triangle,
// then 4-cycle.
MotifClass classify_4motif(const CardinalityTree& t, const NodeRef& left_node);

const char* to_string(MotifClass m);

} // namespace graphzip
