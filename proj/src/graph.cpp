#include "graphzip/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace graphzip {

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::add_edge(int u, int v) {
    const int n = vertex_count();
    if (u < 0 || v < 0 || u >= n || v >= n)
        throw domain_error("graph: edge endpoint out of range");
    if (u == v) return false;
    auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it != a.end() && *it == v) return false;
    a.insert(it, v);
    auto& b = adj_[v];
    b.insert(std::lower_bound(b.begin(), b.end(), u), u);
    ++edge_count_;
    return true;
}

bool Graph::remove_edge(int u, int v) {
    if (u == v) return false;
    auto& a = adj_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it == a.end() || *it != v) return false;
    a.erase(it);
    auto& b = adj_[v];
    b.erase(std::lower_bound(b.begin(), b.end(), u));
    --edge_count_;
    return true;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < vertex_count(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::int64_t DegreeDistribution::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

DegreeDistribution degree_histogram(const Graph& g) {
    DegreeDistribution d;
    d.counts.assign(std::max(g.vertex_count(), 1), 0);
    for (int v = 0; v < g.vertex_count(); ++v) d.counts[g.degree(v)]++;
    return d;
}

Graph load_edge_list(std::string_view text, LoadNotes* notes) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::map<std::int64_t, int> ids;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++lineno;
        std::size_t s = line.find_first_not_of(" \t\r");
        if (s == std::string_view::npos) continue;
        if (line[s] == '#' || line[s] == '%') continue;

        std::int64_t vals[2];
        for (int k = 0; k < 2; ++k) {
            std::size_t e = s;
            while (e < line.size() && !std::isspace(static_cast<unsigned char>(line[e]))) ++e;
            auto tok = line.substr(s, e - s);
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), vals[k]);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || vals[k] < 0)
                throw parse_error("edge list: bad token '" + std::string(tok) + "' on line " + std::to_string(lineno));
            s = line.find_first_not_of(" \t\r", e);
            if (k == 0 && s == std::string_view::npos)
                throw parse_error("edge list: missing second endpoint on line " + std::to_string(lineno));
        }
        raw.emplace_back(vals[0], vals[1]);
        ids.emplace(vals[0], 0);
        ids.emplace(vals[1], 0);
    }
    int next = 0;
    bool gaps = false;
    for (auto& [id, dense] : ids) {
        if (id != next) gaps = true;
        dense = next++;
    }
    Graph g(next);
    LoadNotes local;
    local.compacted_ids = gaps;
    for (auto [u, v] : raw) {
        if (u == v) {
            local.dropped_self_loops++;
            continue;
        }
        if (!g.add_edge(ids[u], ids[v])) local.dropped_duplicates++;
    }
    if (notes) *notes = local;
    return g;
}

Graph load_edge_list_file(const std::string& path, LoadNotes* notes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_edge_list(ss.str(), notes);
}

std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

Graph make_empty(int n) {
    if (n < 0) throw domain_error("empty(n): n must be >= 0");
    return Graph(n);
}

Graph make_complete(int n) {
    if (n < 0) throw domain_error("complete(n): n must be >= 0");
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph generate_er(int n, double p, std::uint64_t seed) {
    if (n < 0 || p < 0.0 || p > 1.0) throw domain_error("er(n,p): need n >= 0 and 0 <= p <= 1");
    Graph g(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < p) g.add_edge(u, v);
    return g;
}

Graph generate_ba(int n, int m, std::uint64_t seed) {
    if (m < 1 || m >= n) throw domain_error("ba(n,m): need 1 <= m < n");
    Graph g(n);
    std::mt19937_64 rng(seed);
    // preferential attachment via the repeated-endpoints list
    std::vector<int> targets(m);
    std::iota(targets.begin(), targets.end(), 0);
    std::vector<int> repeated;
    repeated.reserve(static_cast<std::size_t>(2) * m * (n - m));
    for (int v = m; v < n; ++v) {
        for (int t : targets) {
            g.add_edge(v, t);
            repeated.push_back(t);
            repeated.push_back(v);
        }
        // m distinct draws from the repeated list
        std::vector<int> next;
        while (static_cast<int>(next.size()) < m) {
            std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
            int cand = repeated[pick(rng)];
            if (std::find(next.begin(), next.end(), cand) == next.end()) next.push_back(cand);
        }
        targets = std::move(next);
    }
    return g;
}

Graph generate_ws(int n, int k, double beta, std::uint64_t seed) {
    if (n < 0 || k < 0 || k % 2 != 0 || k >= n || beta < 0.0 || beta > 1.0)
        throw domain_error("ws(n,k,beta): need even k < n and 0 <= beta <= 1");
    Graph g(n);
    for (int j = 1; j <= k / 2; ++j)
        for (int i = 0; i < n; ++i) g.add_edge(i, (i + j) % n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> vert(0, n - 1);
    for (int j = 1; j <= k / 2; ++j) {
        for (int i = 0; i < n; ++i) {
            if (unif(rng) >= beta) continue;
            int old = (i + j) % n;
            if (g.degree(i) >= n - 1) continue;
            int w = vert(rng);
            while (w == i || g.has_edge(i, w)) w = vert(rng);
            g.remove_edge(i, old);
            g.add_edge(i, w);
        }
    }
    return g;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? s.size() : comma + 1;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw domain_error("model spec: expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

int kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw domain_error("model spec: missing parameter '" + key + "'");
    return std::stoi(it->second);
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw domain_error("model spec: missing parameter '" + key + "'");
    return std::stod(it->second);
}

} // namespace

Graph generate_from_string(const std::string& model, std::uint64_t seed) {
    std::size_t colon = model.find(':');
    std::string name = model.substr(0, colon);
    auto kv = colon == std::string::npos ? std::map<std::string, std::string>{} : parse_kv(model.substr(colon + 1));
    if (name == "er") return generate_er(kv_int(kv, "n"), kv_double(kv, "p"), seed);
    if (name == "ba") return generate_ba(kv_int(kv, "n"), kv_int(kv, "m"), seed);
    if (name == "ws") return generate_ws(kv_int(kv, "n"), kv_int(kv, "k"), kv_double(kv, "beta"), seed);
    if (name == "complete") return make_complete(kv_int(kv, "n"));
    if (name == "empty") return make_empty(kv_int(kv, "n"));
    throw domain_error("model spec: unknown model '" + name + "'");
}

namespace {

bool extend_mapping(const Graph& g1, const Graph& g2, std::vector<int>& map12, std::vector<char>& used2, int depth) {
    const int n = g1.vertex_count();
    if (depth == n) return true;
    for (int cand = 0; cand < n; ++cand) {
        if (used2[cand]) continue;
        if (g2.degree(cand) != g1.degree(depth)) continue;
        bool ok = true;
        for (int prev = 0; prev < depth && ok; ++prev)
            if (g1.has_edge(depth, prev) != g2.has_edge(cand, map12[prev])) ok = false;
        if (!ok) continue;
        map12[depth] = cand;
        used2[cand] = 1;
        if (extend_mapping(g1, g2, map12, used2, depth + 1)) return true;
        used2[cand] = 0;
    }
    return false;
}

} // namespace

bool is_isomorphic_small(const Graph& g1, const Graph& g2) {
    const int n = g1.vertex_count();
    if (n > 12 || g2.vertex_count() > 12)
        throw domain_error("is_isomorphic_small: supports n <= 12 only");
    if (n != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
    auto degs = [](const Graph& g) {
        std::vector<int> d(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) d[v] = g.degree(v);
        std::sort(d.begin(), d.end());
        return d;
    };
    if (degs(g1) != degs(g2)) return false;
    std::vector<int> map12(n, -1);
    std::vector<char> used2(n, 0);
    return extend_mapping(g1, g2, map12, used2, 0);
}

Graph graph_from_precision(const double* omega, int p, double tol) {
    if (p < 0) throw domain_error("graph_from_precision: negative dimension");
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::abs(omega[static_cast<std::size_t>(i) * p + j]) > tol) g.add_edge(i, j);
    return g;
}

} // namespace graphzip
