#include "graphzip/coder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "graphzip/bitio.hpp"
#include "graphzip/dist.hpp"
#include "graphzip/range_coder.hpp"

namespace graphzip {

const char* to_string(Family f) {
    switch (f) {
        case Family::IID: return "iid";
        case Family::Triangle: return "triangle";
        case Family::CommonNeighbor: return "cn";
        case Family::FourMotif: return "motif4";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "iid") return Family::IID;
    if (s == "triangle") return Family::Triangle;
    if (s == "cn" || s == "common-neighbor") return Family::CommonNeighbor;
    if (s == "motif4" || s == "4motif") return Family::FourMotif;
    throw domain_error("unknown coder family '" + s + "'");
}

std::string to_string(const CoderSpec& spec) {
    std::string out = to_string(spec.family);
    out += spec.klass == Klass::Class1 ? "-c1" : "-c2";
    out += spec.mode == Mode::Learned ? "-learned" : "-universal";
    return out;
}

int bucket_count(Family f) {
    switch (f) {
        case Family::IID: return 1;
        case Family::Triangle: return 2;
        case Family::CommonNeighbor: return kCommonNeighborCap + 1;
        case Family::FourMotif: return 4;
    }
    return 1;
}

std::uint32_t theta_to_fp(double theta) {
    theta = clamp_theta(theta);
    const double scaled = std::round(theta * 4294967296.0);
    const double lo = 4096.0, hi = 4294967296.0 - 4096.0;
    return static_cast<std::uint32_t>(std::clamp(scaled, lo, hi));
}

double fp_to_theta(std::uint32_t fp) {
    return clamp_theta(static_cast<double>(fp) / 4294967296.0);
}

// ---------------------------------------------------------------------------
// stats

std::string CoderStats::to_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["family"] = to_string(family);
    j["edge_prob_fp"] = edge_prob;
    j["triangle_fp"] = triangle;
    j["common_neighbor_fp"] = common_neighbor;
    j["motif_fp"] = motif;
    j["degree_hist_fp"] = degree_hist;
    return j.dump(2);
}

CoderStats CoderStats::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("stats file: ") + e.what());
    }
    CoderStats s;
    try {
        s.family = family_from_string(j.at("family").get<std::string>());
        s.edge_prob = j.at("edge_prob_fp").get<std::uint32_t>();
        auto tri = j.at("triangle_fp").get<std::vector<std::uint32_t>>();
        auto mot = j.at("motif_fp").get<std::vector<std::uint32_t>>();
        if (tri.size() != 2 || mot.size() != 4) throw parse_error("stats file: bad array sizes");
        std::copy(tri.begin(), tri.end(), s.triangle.begin());
        std::copy(mot.begin(), mot.end(), s.motif.begin());
        s.common_neighbor = j.at("common_neighbor_fp").get<std::vector<std::uint32_t>>();
        s.degree_hist = j.at("degree_hist_fp").get<std::vector<std::uint32_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("stats file: ") + e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// header

namespace {

constexpr std::uint8_t kMagic[4] = {'G', 'Z', 'T', '1'};
constexpr std::uint8_t kVersion = 1;

struct Header {
    CoderSpec spec;
    int n = 0;
    std::int64_t edges = -1;               // universal class 1 iid
    std::vector<std::int64_t> degree_hist; // universal class 2, n bins summing to n
    CoderStats stats;                      // learned
};

void write_header(BitWriter& bw, const Header& h) {
    for (auto b : kMagic) bw.put_bits(b, 8);
    bw.put_bits(kVersion, 8);
    const std::uint8_t coder = static_cast<std::uint8_t>(
        static_cast<int>(h.spec.family) | (h.spec.klass == Klass::Class2 ? 4 : 0));
    bw.put_bits(coder, 8);
    bw.put_bits(h.spec.mode == Mode::Universal ? 1 : 0, 8);
    elias_delta_encode(bw, static_cast<std::uint64_t>(h.n));

    if (h.spec.mode == Mode::Universal) {
        if (h.spec.klass == Klass::Class1 && h.spec.family == Family::IID)
            elias_delta_encode(bw, static_cast<std::uint64_t>(h.edges) + 1);
        if (h.spec.klass == Klass::Class2)
            encode_composition(bw, h.degree_hist);
    } else {
        const CoderStats& s = h.stats;
        switch (h.spec.family) {
            case Family::IID:
                bw.put_bits(s.edge_prob, 32);
                break;
            case Family::Triangle:
                bw.put_bits(s.triangle[0], 32);
                bw.put_bits(s.triangle[1], 32);
                break;
            case Family::CommonNeighbor:
                elias_delta_encode(bw, s.common_neighbor.size());
                for (auto p : s.common_neighbor) bw.put_bits(p, 32);
                break;
            case Family::FourMotif:
                // wire order: 4clique, double-triangle, 4cycle, fallback
                bw.put_bits(s.motif[3], 32);
                bw.put_bits(s.motif[2], 32);
                bw.put_bits(s.motif[1], 32);
                bw.put_bits(s.motif[0], 32);
                break;
        }
        if (h.spec.klass == Klass::Class2) {
            elias_delta_encode(bw, s.degree_hist.size() + 1);
            for (auto c : s.degree_hist) elias_delta_encode(bw, static_cast<std::uint64_t>(c) + 1);
        }
    }
    bw.align_to_byte();
}

Header read_header(BitReader& br) {
    for (auto b : kMagic)
        if (br.get_bits(8) != b) throw decode_error("bad magic, not a graphzip stream");
    if (br.get_bits(8) != kVersion) throw decode_error("unsupported stream version");
    const auto coder = br.get_bits(8);
    const auto mode = br.get_bits(8);
    if ((coder & ~7ull) != 0 || mode > 1) throw decode_error("bad coder/mode byte");
    Header h;
    h.spec.family = static_cast<Family>(coder & 3);
    h.spec.klass = (coder & 4) ? Klass::Class2 : Klass::Class1;
    h.spec.mode = mode ? Mode::Universal : Mode::Learned;
    const auto n = elias_delta_decode(br);
    if (n == 0 || n > (1u << 30)) throw decode_error("bad vertex count");
    h.n = static_cast<int>(n);

    if (h.spec.mode == Mode::Universal) {
        if (h.spec.klass == Klass::Class1 && h.spec.family == Family::IID)
            h.edges = static_cast<std::int64_t>(elias_delta_decode(br)) - 1;
        if (h.spec.klass == Klass::Class2)
            h.degree_hist = decode_composition(br, h.n, h.n);
    } else {
        CoderStats& s = h.stats;
        s.family = h.spec.family;
        switch (h.spec.family) {
            case Family::IID:
                s.edge_prob = static_cast<std::uint32_t>(br.get_bits(32));
                break;
            case Family::Triangle:
                s.triangle[0] = static_cast<std::uint32_t>(br.get_bits(32));
                s.triangle[1] = static_cast<std::uint32_t>(br.get_bits(32));
                break;
            case Family::CommonNeighbor: {
                const auto len = elias_delta_decode(br);
                if (len > kCommonNeighborCap + 1) throw decode_error("bad common-neighbor table size");
                s.common_neighbor.resize(len);
                for (auto& p : s.common_neighbor) p = static_cast<std::uint32_t>(br.get_bits(32));
                break;
            }
            case Family::FourMotif:
                s.motif[3] = static_cast<std::uint32_t>(br.get_bits(32));
                s.motif[2] = static_cast<std::uint32_t>(br.get_bits(32));
                s.motif[1] = static_cast<std::uint32_t>(br.get_bits(32));
                s.motif[0] = static_cast<std::uint32_t>(br.get_bits(32));
                break;
        }
        if (h.spec.klass == Klass::Class2) {
            const auto len = elias_delta_decode(br) - 1;
            if (len > (1u << 24)) throw decode_error("bad histogram size");
            s.degree_hist.resize(len);
            for (auto& c : s.degree_hist)
                c = static_cast<std::uint32_t>(elias_delta_decode(br) - 1);
        }
    }
    br.align_to_byte();
    return h;
}

// ---------------------------------------------------------------------------
// coding walk

struct TrainAccum {
    std::vector<std::uint64_t> left_sum;
    std::vector<std::uint64_t> pair_sum;
    std::vector<int>* bucket_trace = nullptr;

    explicit TrainAccum(int buckets) : left_sum(buckets, 0), pair_sum(buckets, 0) {}

    void add(int bucket, std::int64_t v, std::int64_t trials) {
        left_sum[bucket] += static_cast<std::uint64_t>(v);
        pair_sum[bucket] += static_cast<std::uint64_t>(trials);
    }
};

struct Models {
    CoderSpec spec;
    int n = 0;
    LogFactCache lgf;
    std::vector<double> learned_theta;
    double p_hat = 0.5;
    std::vector<KtCounter> kt;
    std::vector<std::uint64_t> degree_counts;

    double theta_for(int bucket) {
        if (spec.family == Family::IID) {
            if (spec.klass == Klass::Class2) return 0.5;  // cancels in the counting conditional
            return spec.mode == Mode::Learned ? learned_theta[0] : p_hat;
        }
        if (spec.mode == Mode::Learned)
            return learned_theta[std::min<std::size_t>(bucket, learned_theta.size() - 1)];
        return kt[bucket].estimate();
    }
};

Models build_models(const Header& h) {
    Models m;
    m.spec = h.spec;
    m.n = h.n;
    m.lgf.ensure(h.n + 1);
    if (h.spec.mode == Mode::Learned) {
        const CoderStats& s = h.stats;
        switch (h.spec.family) {
            case Family::IID:
                m.learned_theta = {fp_to_theta(s.edge_prob)};
                break;
            case Family::Triangle:
                m.learned_theta = {fp_to_theta(s.triangle[0]), fp_to_theta(s.triangle[1])};
                break;
            case Family::CommonNeighbor:
                if (s.common_neighbor.empty()) throw config_error("stats: empty common-neighbor table");
                for (auto p : s.common_neighbor) m.learned_theta.push_back(fp_to_theta(p));
                break;
            case Family::FourMotif:
                for (auto p : s.motif) m.learned_theta.push_back(fp_to_theta(p));
                break;
        }
        if (h.spec.klass == Klass::Class2) {
            m.degree_counts.assign(h.n, 0);
            for (int j = 0; j < h.n; ++j) {
                const std::uint64_t avg =
                    j < static_cast<int>(s.degree_hist.size()) ? s.degree_hist[j] : 0;
                m.degree_counts[j] = avg + 128;  // add-1/2 smoothing in 8-bit fixed point
            }
        }
    } else {
        if (h.spec.klass == Klass::Class1 && h.spec.family == Family::IID) {
            if (h.n >= 2) {
                const double pairs = 0.5 * static_cast<double>(h.n) * (h.n - 1);
                m.p_hat = clamp_theta(static_cast<double>(h.edges) / pairs);
            }
        }
        m.kt.assign(bucket_count(h.spec.family), KtCounter{});
        if (h.spec.klass == Klass::Class2) {
            if (static_cast<int>(h.degree_hist.size()) != h.n)
                throw decode_error("histogram does not match vertex count");
            m.degree_counts.assign(h.degree_hist.begin(), h.degree_hist.end());
        }
    }
    return m;
}

// context bucket for the left child of a split parent, from already coded
// structure only: the parent's left-level path, the pivot path, and the
// adjacency among earlier picks
int bucket_of(Family fam, const std::vector<std::int32_t>& par,
              const std::vector<std::int32_t>& pivot,
              const std::vector<std::vector<std::int32_t>>& pick_nbrs,
              const std::vector<char>& mark, std::vector<char>& pmark) {
    switch (fam) {
        case Family::IID:
            return 0;
        case Family::Triangle:
            for (auto lv : par)
                if (mark[lv]) return 1;
            return 0;
        case Family::CommonNeighbor: {
            int m = 0;
            for (auto lv : par) m += mark[lv];
            return std::min(m, kCommonNeighborCap);
        }
        case Family::FourMotif:
            break;
    }

    auto picks_adjacent = [&](std::int32_t a, std::int32_t b) {
        if (a > b) std::swap(a, b);
        const auto& nb = pick_nbrs[b];
        return std::binary_search(nb.begin(), nb.end(), a);
    };

    std::vector<std::int32_t> ci;
    for (auto lv : par)
        if (mark[lv]) ci.push_back(lv);

    if (ci.size() >= 2) {
        for (std::size_t i = 0; i < ci.size(); ++i)
            for (std::size_t j = i + 1; j < ci.size(); ++j)
                if (picks_adjacent(ci[i], ci[j])) return 3;  // 4-clique
        return 2;  // double-triangle sharing the coded edge
    }
    if (ci.size() == 1) {
        const auto& nbr1 = pick_nbrs[ci[0]];
        for (auto lv : nbr1)
            if (mark[lv]) return 2;  // second triangle on the pick side
        for (auto lv : par)
            if (std::binary_search(nbr1.begin(), nbr1.end(), lv)) return 2;  // parent side
        return 0;
    }
    // disjoint contexts: a chordless square needs one level from each side
    bool found = false;
    for (auto lv : par) pmark[lv] = 1;
    for (auto a : par) {
        if (found) break;
        for (auto b : pivot) {
            if (pmark[b]) continue;
            if (picks_adjacent(a, b)) {
                found = true;
                break;
            }
        }
    }
    for (auto lv : par) pmark[lv] = 0;
    return found ? 1 : 0;
}

enum class WalkMode { Encode, Decode, Collect };

template <WalkMode M>
CardinalityTree walk(Models& mdl, const CardinalityTree* src, RangeEncoder* enc,
                     RangeDecoder* dec, TrainAccum* acc, int* leftover_degree = nullptr) {
    const int n = mdl.n;
    const Family fam = mdl.spec.family;
    const bool class2 = mdl.spec.klass == Klass::Class2;
    const bool universal = mdl.spec.mode == Mode::Universal;
    constexpr bool coding = M != WalkMode::Collect;

    CardinalityTree t;
    t.n = n;
    t.levels.resize(n);
    t.levels[0].cards = {static_cast<std::int32_t>(n)};

    std::vector<std::int32_t> prev_cards{static_cast<std::int32_t>(n)};
    std::vector<std::vector<std::int32_t>> prev_levels(1);
    std::vector<std::vector<std::int32_t>> pick_nbrs;
    if (fam == Family::FourMotif) pick_nbrs.resize(n);
    std::vector<char> mark(n, 0), pmark(n, 0);

    struct Block {
        int pos;
        int trials;
        int bucket;
    };
    std::vector<Block> blocks;
    std::vector<std::int32_t> values;
    std::vector<std::uint64_t> kt_left, kt_pair;
    if (class2 && universal && fam != Family::IID) {
        kt_left.assign(bucket_count(fam), 0);
        kt_pair.assign(bucket_count(fam), 0);
    }

    for (int L = 1; L < n; ++L) {
        const int alpha = prev_cards[0] > 0 ? 0 : 1;
        const auto& pivot = prev_levels[alpha];
        const int kcheck = static_cast<int>(pivot.size());
        for (auto lv : pivot) mark[lv] = 1;
        if (fam == Family::FourMotif) pick_nbrs[L] = pivot;

        blocks.clear();
        for (int pos = 0; pos < static_cast<int>(prev_cards.size()); ++pos) {
            const int r = prev_cards[pos] - (pos == alpha ? 1 : 0);
            if (r >= 1) blocks.push_back({pos, r, 0});
        }
        for (auto& b : blocks) {
            b.bucket = bucket_of(fam, prev_levels[b.pos], pivot, pick_nbrs, mark, pmark);
            if (acc && acc->bucket_trace) acc->bucket_trace->push_back(b.bucket);
        }

        values.assign(blocks.size(), 0);
        if (!class2) {
            for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                const auto& b = blocks[bi];
                std::int32_t v;
                if constexpr (coding) {
                    FrequencyModel fm =
                        FrequencyModel::from_weights(mdl.lgf.binomial_weights(b.trials, mdl.theta_for(b.bucket)));
                    if constexpr (M == WalkMode::Encode) {
                        v = src->levels[L].cards[2 * bi];
                        fm.encode(*enc, v);
                    } else {
                        v = static_cast<std::int32_t>(fm.decode(*dec));
                    }
                } else {
                    v = src->levels[L].cards[2 * bi];
                }
                values[bi] = v;
                if constexpr (M == WalkMode::Collect) acc->add(b.bucket, v, b.trials);
                else if (universal && fam != Family::IID)
                    mdl.kt[b.bucket].update(v, static_cast<std::uint64_t>(b.trials) - v);
            }
        } else {
            // degree of this level's pick, conditioned on the lower bound
            // already visible in the tree
            int k = 0;
            if constexpr (M != WalkMode::Decode) {
                int lsum = 0;
                for (std::size_t bi = 0; bi < blocks.size(); ++bi)
                    lsum += src->levels[L].cards[2 * bi];
                k = kcheck + lsum;
            }
            if constexpr (coding) {
                std::vector<int> support;
                std::vector<std::uint64_t> counts;
                for (int j = kcheck; j < n; ++j) {
                    if (mdl.degree_counts[j] == 0) continue;
                    support.push_back(j);
                    counts.push_back(mdl.degree_counts[j]);
                }
                if (support.empty()) throw decode_error("degree model has empty support");
                FrequencyModel dm = FrequencyModel::from_counts(counts);
                if constexpr (M == WalkMode::Encode) {
                    const auto it = std::lower_bound(support.begin(), support.end(), k);
                    if (it == support.end() || *it != k)
                        throw config_error("degree " + std::to_string(k) + " has no mass in the model");
                    if (dm.size() > 1) dm.encode(*enc, static_cast<int>(it - support.begin()));
                } else {
                    k = support[dm.size() > 1 ? dm.decode(*dec) : 0];
                }

                std::vector<int> totals;
                std::vector<double> thetas;
                totals.reserve(blocks.size());
                for (const auto& b : blocks) {
                    totals.push_back(b.trials);
                    thetas.push_back(mdl.theta_for(b.bucket));
                }
                int target = k - kcheck;
                if (target < 0) throw decode_error("decoded degree below its lower bound");
                LevelConditionalCoder lcc(std::move(totals), std::move(thetas), target);
                for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                    const int lo = lcc.lo(), hi = lcc.hi();
                    std::int32_t v;
                    if (lo == hi) {
                        v = lo;
                        if constexpr (M == WalkMode::Encode) {
                            if (src->levels[L].cards[2 * bi] != v)
                                throw domain_error("tree value contradicts forced conditional");
                        }
                    } else {
                        auto w = lcc.weights();
                        FrequencyModel fm = FrequencyModel::from_weights(w);
                        if constexpr (M == WalkMode::Encode) {
                            v = src->levels[L].cards[2 * bi];
                            fm.encode(*enc, v - lo);
                        } else {
                            v = static_cast<std::int32_t>(lo + fm.decode(*dec));
                        }
                    }
                    lcc.advance(v);
                    values[bi] = v;
                }
            } else {
                for (std::size_t bi = 0; bi < blocks.size(); ++bi)
                    values[bi] = src->levels[L].cards[2 * bi];
            }
            if constexpr (M == WalkMode::Collect) {
                for (std::size_t bi = 0; bi < blocks.size(); ++bi)
                    acc->add(blocks[bi].bucket, values[bi], blocks[bi].trials);
            } else if (universal && fam != Family::IID) {
                // class 2 estimates freeze within a level
                for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                    kt_left[blocks[bi].bucket] += static_cast<std::uint64_t>(values[bi]);
                    kt_pair[blocks[bi].bucket] += static_cast<std::uint64_t>(blocks[bi].trials);
                }
                for (std::size_t b = 0; b < kt_left.size(); ++b) {
                    if (kt_pair[b] == 0) continue;
                    mdl.kt[b].update(kt_left[b], kt_pair[b] - kt_left[b]);
                    kt_left[b] = 0;
                    kt_pair[b] = 0;
                }
            }
        }

        for (auto lv : pivot) mark[lv] = 0;

        auto& lvl = t.levels[L];
        lvl.cards.resize(2 * blocks.size());
        lvl.parent_of_pair.resize(blocks.size());
        std::vector<std::vector<std::int32_t>> next_levels(2 * blocks.size());
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& b = blocks[bi];
            lvl.parent_of_pair[bi] = b.pos;
            lvl.cards[2 * bi] = values[bi];
            lvl.cards[2 * bi + 1] = b.trials - values[bi];
            next_levels[2 * bi] = prev_levels[b.pos];
            next_levels[2 * bi].push_back(L);
            next_levels[2 * bi + 1] = std::move(prev_levels[b.pos]);
        }
        if constexpr (M == WalkMode::Encode) {
            if (lvl.cards != src->levels[L].cards || lvl.parent_of_pair != src->levels[L].parent_of_pair)
                throw domain_error("encode: tree does not satisfy the transform invariants");
        }
        prev_cards = lvl.cards;
        prev_levels = std::move(next_levels);
    }

    if (leftover_degree) {
        *leftover_degree = 0;
        for (std::size_t pos = 0; pos < prev_cards.size(); ++pos)
            if (prev_cards[pos] > 0) *leftover_degree = static_cast<int>(prev_levels[pos].size());
    }
    return t;
}

// per-pick degrees read off the tree: the pivot path length plus the level's
// left sum, and the leftover vertex's path length at the last level
std::vector<std::int64_t> degrees_from_tree(const CardinalityTree& t) {
    const int n = t.n;
    std::vector<std::int64_t> hist(n, 0);
    std::vector<std::vector<std::int32_t>> prev_levels(1);
    std::vector<std::int32_t> prev_cards{static_cast<std::int32_t>(n)};
    for (int L = 1; L < n; ++L) {
        const int alpha = prev_cards[0] > 0 ? 0 : 1;
        const int kcheck = static_cast<int>(prev_levels[alpha].size());
        const auto& lvl = t.levels[L];
        int lsum = 0;
        for (std::size_t p = 0; p < lvl.parent_of_pair.size(); ++p) lsum += lvl.cards[2 * p];
        hist[static_cast<std::size_t>(kcheck + lsum)]++;
        std::vector<std::vector<std::int32_t>> next(lvl.cards.size());
        for (std::size_t p = 0; p < lvl.parent_of_pair.size(); ++p) {
            next[2 * p] = prev_levels[lvl.parent_of_pair[p]];
            next[2 * p].push_back(L);
            next[2 * p + 1] = std::move(prev_levels[lvl.parent_of_pair[p]]);
        }
        prev_levels = std::move(next);
        prev_cards = lvl.cards;
    }
    for (std::size_t pos = 0; pos < prev_cards.size(); ++pos)
        if (prev_cards[pos] > 0) hist[prev_levels[pos].size()]++;
    return hist;
}

} // namespace

// ---------------------------------------------------------------------------

EncodeResult encode_tree(const CardinalityTree& t, CoderSpec spec, const CoderStats* stats) {
    validate_tree(t);
    Header h;
    h.spec = spec;
    h.n = t.n;
    if (spec.mode == Mode::Learned) {
        if (!stats) throw config_error("learned mode requires coder statistics");
        if (stats->family != spec.family)
            throw config_error("stats were trained for a different family");
        h.stats = *stats;
    } else {
        if (spec.klass == Klass::Class1 && spec.family == Family::IID) {
            std::int64_t edges = 0;
            for (int L = 1; L < t.level_count(); ++L)
                for (std::size_t p = 0; p < t.levels[L].parent_of_pair.size(); ++p)
                    edges += t.levels[L].cards[2 * p];
            h.edges = edges;
        }
        if (spec.klass == Klass::Class2) h.degree_hist = degrees_from_tree(t);
    }

    BitWriter bw;
    write_header(bw, h);
    EncodeResult res;
    res.header_bits = bw.bit_count();

    Models mdl = build_models(h);
    RangeEncoder enc;
    walk<WalkMode::Encode>(mdl, &t, &enc, nullptr, nullptr);
    auto payload = enc.finish();
    res.ideal_payload_bits = enc.ideal_bits();
    res.payload_bits = static_cast<std::int64_t>(payload.size()) * 8;

    res.bytes = bw.take();
    res.bytes.insert(res.bytes.end(), payload.begin(), payload.end());
    return res;
}

EncodeResult encode_graph(const Graph& g, CoderSpec spec, const CoderStats* stats,
                          const VertexPicker& picker) {
    if (g.vertex_count() == 0) throw domain_error("cannot encode the empty graph");
    auto tr = graph_to_tree(g, picker);
    return encode_tree(tr.tree, spec, stats);
}

DecodedStream decode_tree(std::span<const std::uint8_t> bytes) {
    BitReader br(bytes);
    Header h;
    try {
        h = read_header(br);
    } catch (const decode_error&) {
        throw;
    } catch (const error& e) {
        throw decode_error(std::string("bad header: ") + e.what());
    }
    const auto start = static_cast<std::size_t>(br.byte_position());
    if (start > bytes.size()) throw decode_error("truncated header");
    RangeDecoder dec(bytes.subspan(start));
    Models mdl = build_models(h);
    DecodedStream out;
    out.spec = h.spec;
    try {
        out.tree = walk<WalkMode::Decode>(mdl, nullptr, nullptr, &dec, nullptr);
    } catch (const decode_error&) {
        throw;
    } catch (const error& e) {
        throw decode_error(std::string("inconsistent payload: ") + e.what());
    }
    return out;
}

Graph decode_graph(std::span<const std::uint8_t> bytes) {
    return tree_to_graph(decode_tree(bytes).tree);
}

std::vector<int> coded_node_buckets(const CardinalityTree& t, Family family) {
    Models mdl;
    mdl.spec = CoderSpec{family, Klass::Class1, Mode::Universal};
    mdl.n = t.n;
    mdl.kt.assign(bucket_count(family), KtCounter{});
    TrainAccum acc(bucket_count(family));
    std::vector<int> trace;
    acc.bucket_trace = &trace;
    walk<WalkMode::Collect>(mdl, &t, nullptr, nullptr, &acc);
    return trace;
}

CoderStats train_stats(std::span<const Graph> graphs, Family family) {
    if (graphs.empty()) throw config_error("training requires at least one graph");
    const int nb = bucket_count(family);
    std::vector<double> ratio_sum(nb, 0.0);
    std::vector<int> ratio_cnt(nb, 0);
    double p_sum = 0.0;
    int p_cnt = 0;
    std::vector<double> hist_avg;
    int max_bucket_seen = 0;

    for (const auto& g : graphs) {
        if (g.vertex_count() == 0) throw config_error("training graph has no vertices");
        auto tr = graph_to_tree(g);
        Models mdl;
        mdl.spec = CoderSpec{family, Klass::Class1, Mode::Universal};
        mdl.n = g.vertex_count();
        mdl.kt.assign(nb, KtCounter{});
        TrainAccum acc(nb);
        walk<WalkMode::Collect>(mdl, &tr.tree, nullptr, nullptr, &acc);

        std::uint64_t all_l = 0, all_p = 0;
        for (int b = 0; b < nb; ++b) {
            all_l += acc.left_sum[b];
            all_p += acc.pair_sum[b];
            if (acc.pair_sum[b] > 0) {
                ratio_sum[b] += static_cast<double>(acc.left_sum[b]) / static_cast<double>(acc.pair_sum[b]);
                ratio_cnt[b]++;
                max_bucket_seen = std::max(max_bucket_seen, b);
            }
        }
        if (all_p > 0) {
            p_sum += static_cast<double>(all_l) / static_cast<double>(all_p);
            p_cnt++;
        }
        auto h = degree_histogram(g);
        if (h.counts.size() > hist_avg.size()) hist_avg.resize(h.counts.size(), 0.0);
        for (std::size_t j = 0; j < h.counts.size(); ++j)
            hist_avg[j] += static_cast<double>(h.counts[j]);
    }

    const double ng = static_cast<double>(graphs.size());
    CoderStats s;
    s.family = family;
    s.edge_prob = theta_to_fp(p_cnt > 0 ? p_sum / p_cnt : 0.5);
    auto bucket_theta = [&](int b) {
        return theta_to_fp(ratio_cnt[b] > 0 ? ratio_sum[b] / ratio_cnt[b] : 0.5);
    };
    switch (family) {
        case Family::IID:
            break;
        case Family::Triangle:
            s.triangle = {bucket_theta(0), bucket_theta(1)};
            break;
        case Family::CommonNeighbor:
            s.common_neighbor.resize(static_cast<std::size_t>(max_bucket_seen) + 1);
            for (int b = 0; b <= max_bucket_seen; ++b) s.common_neighbor[b] = bucket_theta(b);
            break;
        case Family::FourMotif:
            for (int b = 0; b < 4; ++b) s.motif[b] = bucket_theta(b);
            break;
    }
    s.degree_hist.resize(hist_avg.size());
    for (std::size_t j = 0; j < hist_avg.size(); ++j)
        s.degree_hist[j] = static_cast<std::uint32_t>(std::llround(hist_avg[j] / ng * 256.0));
    return s;
}

double analytic_labeled_iid_bits(int n, std::int64_t edges) {
    if (n < 2) return static_cast<double>(elias_delta_length(static_cast<std::uint64_t>(n) + 1));
    const double pairs = 0.5 * static_cast<double>(n) * (n - 1);
    const double p = static_cast<double>(edges) / pairs;
    double h = 0.0;
    if (p > 0.0 && p < 1.0) h = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    return pairs * h +
           static_cast<double>(elias_delta_length(static_cast<std::uint64_t>(n))) +
           static_cast<double>(elias_delta_length(static_cast<std::uint64_t>(edges) + 1));
}

} // namespace graphzip
