#include "graphzip/tree.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>

namespace graphzip {

int CardinalityTree::first_nonempty(int level) const {
    const auto& cards = levels[level].cards;
    for (std::size_t i = 0; i < cards.size(); ++i)
        if (cards[i] > 0) return static_cast<int>(i);
    return -1;
}

NodeRef CardinalityTree::parent(const NodeRef& node) const {
    if (node.level < 1) throw domain_error("tree: root has no parent");
    const int pair = (node.index - 1) / 2;
    return NodeRef{node.level - 1, levels[node.level].parent_of_pair[pair] + 1};
}

std::int32_t CardinalityTree::residual(int level, int pos) const {
    return levels[level].cards[pos] - (pos == first_nonempty(level) ? 1 : 0);
}

VertexPicker VertexPicker::min_index() {
    VertexPicker p;
    p.pick = [](const std::vector<int>&) { return std::size_t{0}; };
    return p;
}

VertexPicker VertexPicker::random(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    VertexPicker p;
    p.pick = [rng](const std::vector<int>& members) {
        std::uniform_int_distribution<std::size_t> d(0, members.size() - 1);
        return d(*rng);
    };
    return p;
}

TreeResult graph_to_tree(const Graph& g, const VertexPicker& picker) {
    const int n = g.vertex_count();
    if (n < 1) throw domain_error("graph_to_tree: graph must have at least one vertex");
    TreeResult res;
    res.tree.n = n;
    res.tree.levels.resize(n);
    res.tree.levels[0].cards = {n};

    std::vector<std::vector<int>> nodes(1);
    nodes[0].resize(n);
    std::iota(nodes[0].begin(), nodes[0].end(), 0);
    std::vector<char> is_nbr(n, 0);

    for (int l = 0; l + 1 < n; ++l) {
        int alpha = -1;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (!nodes[i].empty()) {
                alpha = static_cast<int>(i);
                break;
            }
        auto& src = nodes[alpha];
        const std::size_t pick_at = picker.pick(src);
        const int v = src[pick_at];
        src.erase(src.begin() + static_cast<std::ptrdiff_t>(pick_at));
        res.pick_order.push_back(v);

        for (int u : g.neighbors(v)) is_nbr[u] = 1;
        auto& next = res.tree.levels[l + 1];
        std::vector<std::vector<int>> next_nodes;
        for (std::size_t pos = 0; pos < nodes.size(); ++pos) {
            if (nodes[pos].empty()) continue;
            std::vector<int> left, right;
            for (int u : nodes[pos]) (is_nbr[u] ? left : right).push_back(u);
            next.parent_of_pair.push_back(static_cast<std::int32_t>(pos));
            next.cards.push_back(static_cast<std::int32_t>(left.size()));
            next.cards.push_back(static_cast<std::int32_t>(right.size()));
            next_nodes.push_back(std::move(left));
            next_nodes.push_back(std::move(right));
        }
        for (int u : g.neighbors(v)) is_nbr[u] = 0;
        nodes = std::move(next_nodes);
    }
    return res;
}

Graph tree_to_graph(const CardinalityTree& t) {
    validate_tree(t);
    const int n = t.n;
    Graph prov(n);
    std::vector<std::vector<int>> nodes(1);
    nodes[0].resize(n);
    std::iota(nodes[0].begin(), nodes[0].end(), 0);
    std::vector<int> label(n, -1);

    for (int l = 0; l + 1 < n; ++l) {
        int alpha = -1;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (!nodes[i].empty()) {
                alpha = static_cast<int>(i);
                break;
            }
        const int v = nodes[alpha].front();
        nodes[alpha].erase(nodes[alpha].begin());
        label[v] = l;

        const auto& next = t.levels[l + 1];
        std::vector<std::vector<int>> next_nodes;
        for (std::size_t p = 0; p < next.parent_of_pair.size(); ++p) {
            auto& members = nodes[static_cast<std::size_t>(next.parent_of_pair[p])];
            const int lc = next.cards[2 * p];
            std::vector<int> left(members.begin(), members.begin() + lc);
            std::vector<int> right(members.begin() + lc, members.end());
            for (int u : left) prov.add_edge(v, u);
            next_nodes.push_back(std::move(left));
            next_nodes.push_back(std::move(right));
        }
        nodes = std::move(next_nodes);
    }
    for (int v = 0; v < n; ++v)
        if (label[v] < 0) label[v] = n - 1;

    Graph out(n);
    for (auto [u, v] : prov.edges()) out.add_edge(label[u], label[v]);
    return out;
}

void validate_tree(const CardinalityTree& t) {
    if (t.n < 1) throw domain_error("tree: vertex count must be positive");
    if (t.level_count() != t.n) throw domain_error("tree: expected one level per vertex");
    if (t.levels[0].cards != std::vector<std::int32_t>{t.n})
        throw domain_error("tree: root must hold all vertices");
    if (!t.levels[0].parent_of_pair.empty()) throw domain_error("tree: root has no parent");

    for (int l = 1; l < t.level_count(); ++l) {
        const auto& lv = t.levels[l];
        if (lv.cards.size() != 2 * lv.parent_of_pair.size())
            throw domain_error("tree: children must come in pairs");
        // the split set is exactly the nodes of the previous level with a
        // positive residual, in order
        std::vector<std::int32_t> expected;
        for (int pos = 0; pos < t.node_count(l - 1); ++pos)
            if (t.residual(l - 1, pos) > 0) expected.push_back(pos);
        if (lv.parent_of_pair != expected)
            throw domain_error("tree: split parents do not match positive residuals at level " +
                               std::to_string(l));
        std::int64_t sum = 0;
        for (std::size_t p = 0; p < lv.parent_of_pair.size(); ++p) {
            const std::int32_t lc = lv.cards[2 * p], rc = lv.cards[2 * p + 1];
            if (lc < 0 || rc < 0) throw domain_error("tree: negative cardinality");
            if (lc + rc != t.residual(l - 1, lv.parent_of_pair[p]))
                throw domain_error("tree: child pair does not sum to parent residual at level " +
                                   std::to_string(l));
            sum += lc + rc;
        }
        if (sum != t.n - l)
            throw domain_error("tree: level " + std::to_string(l) + " does not hold n-l vertices");
        const int alpha = t.first_nonempty(l);
        if (alpha < 0 || alpha > 1)
            throw domain_error("tree: first nonempty node must sit at index 1 or 2");
    }
}

std::string dump_tree(const CardinalityTree& t) {
    std::ostringstream out;
    out << "0: " << t.n << '\n';
    for (int l = 1; l < t.level_count(); ++l) {
        out << l << ':';
        const auto& lv = t.levels[l];
        for (std::size_t p = 0; p < lv.parent_of_pair.size(); ++p)
            out << " p" << lv.parent_of_pair[p] << '(' << lv.cards[2 * p] << "L "
                << lv.cards[2 * p + 1] << "R)";
        out << '\n';
    }
    return out.str();
}

namespace {

void check_node(const CardinalityTree& t, const NodeRef& node) {
    if (node.level < 0 || node.level >= t.level_count() || node.index < 1 ||
        node.index > t.node_count(node.level))
        throw domain_error("tree: no such node");
}

// levels l >= 1 whose ancestor-or-self on the path to the root is a left node
std::vector<int> path_left_levels(const CardinalityTree& t, NodeRef node) {
    std::vector<int> out;
    while (node.level >= 1) {
        if (node.is_left()) out.push_back(node.level);
        node = t.parent(node);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

NodeRef alpha_node(const CardinalityTree& t, int level) {
    const int pos = t.first_nonempty(level);
    if (pos < 0) throw domain_error("tree: level has no nonempty node");
    return NodeRef{level, pos + 1};
}

// left-node levels on the path of the node the level-l pick was removed from,
// i.e. the already-picked neighbors of pick l
std::vector<int> picked_neighbor_levels(const CardinalityTree& t, int l) {
    return path_left_levels(t, alpha_node(t, l - 1));
}

bool picks_adjacent(const CardinalityTree& t, int l1, int l2) {
    if (l1 == l2) return false;
    if (l1 > l2) std::swap(l1, l2);
    const auto levels = picked_neighbor_levels(t, l2);
    return std::binary_search(levels.begin(), levels.end(), l1);
}

} // namespace

std::vector<int> ci_levels(const CardinalityTree& t, const NodeRef& node) {
    check_node(t, node);
    auto a = path_left_levels(t, node);
    auto b = path_left_levels(t, alpha_node(t, node.level));
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> i_levels(const CardinalityTree& t, const NodeRef& node) {
    check_node(t, node);
    auto a = path_left_levels(t, node);
    auto b = path_left_levels(t, alpha_node(t, node.level));
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

MotifClass classify_4motif(const CardinalityTree& t, const NodeRef& left_node) {
    check_node(t, left_node);
    if (left_node.level < 1 || !left_node.is_left())
        throw domain_error("classify_4motif: expected a left node below the root");
    const int l = left_node.level;
    const NodeRef par = t.parent(left_node);
    const auto ci = ci_levels(t, par);

    if (ci.size() >= 2) {
        for (std::size_t i = 0; i < ci.size(); ++i)
            for (std::size_t j = i + 1; j < ci.size(); ++j)
                if (picks_adjacent(t, ci[i], ci[j])) return MotifClass::FourClique;
        return MotifClass::DoubleTriangle;  // two triangles sharing the coded edge
    }

    if (ci.size() == 1) {
        const int l1 = ci[0];
        const auto nbr1 = picked_neighbor_levels(t, l1);
        const auto nbrl = picked_neighbor_levels(t, l);
        std::vector<int> shared;
        std::set_intersection(nbr1.begin(), nbr1.end(), nbrl.begin(), nbrl.end(),
                              std::back_inserter(shared));
        if (!shared.empty()) return MotifClass::DoubleTriangle;
        const auto parpath = path_left_levels(t, par);
        shared.clear();
        std::set_intersection(nbr1.begin(), nbr1.end(), parpath.begin(), parpath.end(),
                              std::back_inserter(shared));
        if (!shared.empty()) return MotifClass::DoubleTriangle;
        return MotifClass::None;
    }

    // no common level: look for a chordless square through the coded edge,
    // one side adjacent to the parent's vertices, the other to the pick
    const auto iset = i_levels(t, par);
    if (iset.size() > 1) {
        const auto parpath = path_left_levels(t, par);
        for (std::size_t i = 0; i < iset.size(); ++i)
            for (std::size_t j = i + 1; j < iset.size(); ++j) {
                const bool i_par = std::binary_search(parpath.begin(), parpath.end(), iset[i]);
                const bool j_par = std::binary_search(parpath.begin(), parpath.end(), iset[j]);
                if (i_par == j_par) continue;
                if (picks_adjacent(t, iset[i], iset[j])) return MotifClass::FourCycle;
            }
    }
    return MotifClass::None;
}

const char* to_string(MotifClass m) {
    switch (m) {
        case MotifClass::None: return "none";
        case MotifClass::FourCycle: return "4cycle";
        case MotifClass::DoubleTriangle: return "double-triangle";
        case MotifClass::FourClique: return "4clique";
    }
    return "?";
}

} // namespace graphzip
