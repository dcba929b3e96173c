#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphzip/graph.hpp"
#include "graphzip/tree.hpp"

namespace graphzip {

enum class Family : std::uint8_t { IID = 0, Triangle = 1, CommonNeighbor = 2, FourMotif = 3 };
enum class Klass : std::uint8_t { Class1 = 0, Class2 = 1 };
enum class Mode : std::uint8_t { Learned = 0, Universal = 1 };

struct CoderSpec {
    Family family = Family::IID;
    Klass klass = Klass::Class1;
    Mode mode = Mode::Universal;
    bool operator==(const CoderSpec&) const = default;
};

const char* to_string(Family f);
Family family_from_string(const std::string& s);
std::string to_string(const CoderSpec& spec);

// common-neighbor context buckets above this count share one tail bucket
inline constexpr int kCommonNeighborCap = 64;

int bucket_count(Family f);

// probabilities travel as 32-bit fixed point so encoder and decoder always
// share the exact same model parameters
std::uint32_t theta_to_fp(double theta);
double fp_to_theta(std::uint32_t fp);

// Learned statistics for one model family. Bucket ratios are kept as fixed
// point; the degree histogram keeps 8 fractional bits per bin (average
// counts over the training graphs).
struct CoderStats {
    Family family = Family::IID;
    std::uint32_t edge_prob = 0;
    std::array<std::uint32_t, 2> triangle{};          // [no shared level, shared level]
    std::vector<std::uint32_t> common_neighbor;       // bucket m, tail at the back
    std::array<std::uint32_t, 4> motif{};             // [none, 4cycle, double-tri, 4clique]
    std::vector<std::uint32_t> degree_hist;           // 8 fractional bits

    std::string to_json() const;
    static CoderStats from_json(const std::string& text);
};

CoderStats train_stats(std::span<const Graph> graphs, Family family);

// sequential add-1/2 estimate over accumulated left/right value sums
struct KtCounter {
    std::uint64_t n1 = 0;
    std::uint64_t n0 = 0;
    void update(std::uint64_t left_sum, std::uint64_t right_sum) {
        n1 += left_sum;
        n0 += right_sum;
    }
    double estimate() const {
        return (static_cast<double>(n1) + 0.5) / (static_cast<double>(n1 + n0) + 1.0);
    }
};

struct EncodeResult {
    std::vector<std::uint8_t> bytes;
    std::int64_t header_bits = 0;    // magic through stats block, padded to a byte
    std::int64_t payload_bits = 0;   // 8 * payload bytes
    double ideal_payload_bits = 0.0; // sum of -log2 P over all coded symbols
    std::int64_t total_bits() const { return header_bits + payload_bits; }
};

// Bitstream layout: "GZT1", version byte, coder byte (family | class2 bit),
// mode byte, then bit-packed: elias-delta n, the mode-dependent stats block,
// zero padding to a byte boundary, then the range-coded payload.
EncodeResult encode_tree(const CardinalityTree& t, CoderSpec spec, const CoderStats* stats = nullptr);
EncodeResult encode_graph(const Graph& g, CoderSpec spec, const CoderStats* stats = nullptr,
                          const VertexPicker& picker = VertexPicker::min_index());

struct DecodedStream {
    CardinalityTree tree;
    CoderSpec spec;
};

DecodedStream decode_tree(std::span<const std::uint8_t> bytes);
Graph decode_graph(std::span<const std::uint8_t> bytes);

// context bucket chosen for every coded left node, in coding order; the
// bucket drives which parameter the node is coded under
std::vector<int> coded_node_buckets(const CardinalityTree& t, Family family);

// codelength of the labeled iid baseline: pairwise entropy plus the integer
// side information for n and |E|
double analytic_labeled_iid_bits(int n, std::int64_t edges);

} // namespace graphzip
