#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphzip/bitio.hpp"
#include "graphzip/range_coder.hpp"

namespace graphzip {

// success probabilities are clamped to [eps, 1-eps] so no decodable symbol
// ever gets zero mass
inline constexpr double kThetaEps = 1.0 / (1 << 20);

double clamp_theta(double theta);

double log_choose(std::int64_t n, std::int64_t k);

// pmf of Binom(n, theta) over 0..n, computed in the log domain and scaled so
// the largest entry is 1
std::vector<double> binomial_weights(int n, double theta);

// memoized ln(i!) for the hot coding loops
class LogFactCache {
public:
    void ensure(int n);
    double log_choose(int n, int k) const {
        if (k < 0 || k > n) return -1e300;
        return lf_[n] - lf_[k] - lf_[n - k];
    }
    std::vector<double> binomial_weights(int n, double theta) const;

private:
    std::vector<double> lf_{0.0, 0.0};
};

// quantized model over 0..n
FrequencyModel binomial_model(int n, double theta);

// P(sum of independent Bernoulli(thetas[i]) == s); exact DP, O(s * |thetas|)
double poisson_binomial_pmf(std::span<const double> thetas, int s);
std::vector<double> poisson_binomial_distribution(std::span<const double> thetas);

// one binomial block of a level: the left/right pair under one parameter
struct BinomialBlock {
    int trials;
    double theta;
};

std::vector<double> block_sum_distribution(std::span<const BinomialBlock> blocks);

// Sequential decomposition of the joint distribution of left-node values at
// one level conditioned on their sum. Block j is coded with
// P(v | remaining sum), the ratio of Poisson-binomial tail masses; the product
// of the conditionals equals the joint. Encoder and decoder drive it the same
// way: weights() -> quantize -> code a symbol -> advance(value).
class LevelConditionalCoder {
public:
    LevelConditionalCoder(std::vector<int> totals, std::vector<double> thetas, int target_sum);

    int block_count() const { return static_cast<int>(totals_.size()); }
    bool done() const { return block_ >= block_count(); }
    int remaining_sum() const { return remaining_; }

    int lo() const;                     // least feasible value for the current block
    int hi() const;
    std::vector<double> weights() const;  // conditional pmf over lo()..hi()
    void advance(int value);

private:
    std::vector<int> totals_;
    std::vector<double> thetas_;
    std::vector<std::int64_t> cap_after_;            // sum of trials after block j
    std::vector<std::vector<double>> suffix_;        // suffix_[j]: pmf of blocks j.. truncated at target
    int target_ = 0;
    int remaining_ = 0;
    int block_ = 0;
};

// log2 of the joint probability of the level values given their sum, directly
// from the product-over-blocks / Poisson-binomial form
double level_joint_log2prob(std::span<const int> totals, std::span<const double> thetas,
                            std::span<const int> values);

// log2 probability realized by the sequential decomposition
double level_sequential_log2prob(std::span<const int> totals, std::span<const double> thetas,
                                 std::span<const int> values);

// Enumerative code for weak compositions (the degree histogram is a
// composition of n into n parts). The lexicographic rank is written as a
// fixed-width integer of composition_rank_bits(total, parts) bits.
std::int64_t composition_rank_bits(std::int64_t total, std::int64_t parts);
void encode_composition(BitWriter& bw, std::span<const std::int64_t> bins);
std::vector<std::int64_t> decode_composition(BitReader& br, std::int64_t total, std::int64_t parts);

} // namespace graphzip
