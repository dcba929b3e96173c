#include "graphzip/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace graphzip {

using boost::multiprecision::cpp_int;

double clamp_theta(double theta) {
    return std::clamp(theta, kThetaEps, 1.0 - kThetaEps);
}

double log_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::vector<double> binomial_weights(int n, double theta) {
    if (n < 0) throw domain_error("binomial: negative trial count");
    theta = clamp_theta(theta);
    std::vector<double> lg(static_cast<std::size_t>(n) + 1);
    const double lt = std::log(theta);
    const double lq = std::log1p(-theta);
    double mx = -std::numeric_limits<double>::infinity();
    for (int v = 0; v <= n; ++v) {
        lg[v] = log_choose(n, v) + v * lt + (n - v) * lq;
        mx = std::max(mx, lg[v]);
    }
    for (int v = 0; v <= n; ++v) lg[v] = std::exp(lg[v] - mx);
    return lg;
}

FrequencyModel binomial_model(int n, double theta) {
    auto w = binomial_weights(n, theta);
    return FrequencyModel::from_weights(w);
}

void LogFactCache::ensure(int n) {
    while (static_cast<int>(lf_.size()) <= n)
        lf_.push_back(lf_.back() + std::log(static_cast<double>(lf_.size())));
}

std::vector<double> LogFactCache::binomial_weights(int n, double theta) const {
    theta = clamp_theta(theta);
    std::vector<double> lg(static_cast<std::size_t>(n) + 1);
    const double lt = std::log(theta);
    const double lq = std::log1p(-theta);
    double mx = -std::numeric_limits<double>::infinity();
    for (int v = 0; v <= n; ++v) {
        lg[v] = log_choose(n, v) + v * lt + (n - v) * lq;
        mx = std::max(mx, lg[v]);
    }
    for (int v = 0; v <= n; ++v) lg[v] = std::exp(lg[v] - mx);
    return lg;
}

std::vector<double> poisson_binomial_distribution(std::span<const double> thetas) {
    std::vector<double> dp{1.0};
    dp.reserve(thetas.size() + 1);
    for (double t : thetas) {
        std::vector<double> next(dp.size() + 1, 0.0);
        for (std::size_t s = 0; s < dp.size(); ++s) {
            next[s] += dp[s] * (1.0 - t);
            next[s + 1] += dp[s] * t;
        }
        dp = std::move(next);
    }
    return dp;
}

double poisson_binomial_pmf(std::span<const double> thetas, int s) {
    if (s < 0 || s > static_cast<int>(thetas.size())) return 0.0;
    // DP truncated at s: higher partial sums can never come back down
    std::vector<double> dp(static_cast<std::size_t>(s) + 1, 0.0);
    dp[0] = 1.0;
    int upper = 0;
    for (double t : thetas) {
        upper = std::min(upper + 1, s);
        for (int j = upper; j >= 1; --j) dp[j] = dp[j] * (1.0 - t) + dp[j - 1] * t;
        dp[0] *= (1.0 - t);
    }
    return dp[s];
}

std::vector<double> block_sum_distribution(std::span<const BinomialBlock> blocks) {
    std::vector<double> dp{1.0};
    for (const auto& b : blocks) {
        auto w = binomial_weights(b.trials, b.theta);
        // binomial_weights is scaled by max; rescale to a proper pmf
        double sum = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= sum;
        std::vector<double> next(dp.size() + w.size() - 1, 0.0);
        for (std::size_t i = 0; i < dp.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) next[i + j] += dp[i] * w[j];
        dp = std::move(next);
    }
    return dp;
}

LevelConditionalCoder::LevelConditionalCoder(std::vector<int> totals, std::vector<double> thetas,
                                             int target_sum)
    : totals_(std::move(totals)), thetas_(std::move(thetas)), target_(target_sum), remaining_(target_sum) {
    if (totals_.size() != thetas_.size())
        throw domain_error("level conditional: totals/thetas size mismatch");
    std::int64_t cap = 0;
    for (int t : totals_) {
        if (t < 0) throw domain_error("level conditional: negative block total");
        cap += t;
    }
    if (target_ < 0 || target_ > cap)
        throw domain_error("level conditional: target sum infeasible for block totals");
    for (auto& th : thetas_) th = clamp_theta(th);

    const int nb = block_count();
    cap_after_.assign(nb + 1, 0);
    for (int j = nb - 1; j >= 0; --j) cap_after_[j] = cap_after_[j + 1] + totals_[j];
    // cap_after_[j] currently includes block j; shift to "after j"
    for (int j = 0; j < nb; ++j) cap_after_[j] = cap_after_[j + 1];

    suffix_.assign(nb + 1, {});
    suffix_[nb] = {1.0};
    for (int j = nb - 1; j >= 0; --j) {
        auto w = binomial_weights(totals_[j], thetas_[j]);
        const auto& tail = suffix_[j + 1];
        const std::size_t limit = static_cast<std::size_t>(
            std::min<std::int64_t>(target_, totals_[j] + cap_after_[j])) + 1;
        std::vector<double> conv(limit, 0.0);
        for (std::size_t a = 0; a < w.size() && a < limit; ++a) {
            if (w[a] == 0.0) continue;
            for (std::size_t b = 0; b < tail.size() && a + b < limit; ++b)
                conv[a + b] += w[a] * tail[b];
        }
        double mx = 0.0;
        for (double x : conv) mx = std::max(mx, x);
        if (mx > 0.0)
            for (double& x : conv) x /= mx;
        suffix_[j] = std::move(conv);
    }
}

int LevelConditionalCoder::lo() const {
    return static_cast<int>(std::max<std::int64_t>(0, remaining_ - cap_after_[block_]));
}

int LevelConditionalCoder::hi() const {
    return std::min(totals_[block_], remaining_);
}

std::vector<double> LevelConditionalCoder::weights() const {
    if (done()) throw domain_error("level conditional: all blocks consumed");
    const int l = lo(), h = hi();
    auto w = binomial_weights(totals_[block_], thetas_[block_]);
    const auto& tail = suffix_[block_ + 1];
    std::vector<double> out(static_cast<std::size_t>(h - l) + 1, 0.0);
    for (int v = l; v <= h; ++v) {
        const std::size_t rest = static_cast<std::size_t>(remaining_ - v);
        out[v - l] = rest < tail.size() ? w[v] * tail[rest] : 0.0;
    }
    return out;
}

void LevelConditionalCoder::advance(int value) {
    if (done()) throw domain_error("level conditional: all blocks consumed");
    if (value < lo() || value > hi())
        throw domain_error("level conditional: value outside feasible range");
    remaining_ -= value;
    ++block_;
}

double level_joint_log2prob(std::span<const int> totals, std::span<const double> thetas,
                            std::span<const int> values) {
    std::vector<BinomialBlock> blocks;
    int sum = 0;
    double lp = 0.0;
    for (std::size_t j = 0; j < totals.size(); ++j) {
        const double th = clamp_theta(thetas[j]);
        blocks.push_back({totals[j], th});
        sum += values[j];
        lp += (log_choose(totals[j], values[j]) + values[j] * std::log(th) +
               (totals[j] - values[j]) * std::log1p(-th)) / std::numbers::ln2;
    }
    auto dist = block_sum_distribution(blocks);
    return lp - std::log2(dist[static_cast<std::size_t>(sum)]);
}

double level_sequential_log2prob(std::span<const int> totals, std::span<const double> thetas,
                                 std::span<const int> values) {
    int target = std::accumulate(values.begin(), values.end(), 0);
    LevelConditionalCoder coder(std::vector<int>(totals.begin(), totals.end()),
                                std::vector<double>(thetas.begin(), thetas.end()), target);
    double lp = 0.0;
    for (int v : values) {
        auto w = coder.weights();
        double sum = std::accumulate(w.begin(), w.end(), 0.0);
        lp += std::log2(w[static_cast<std::size_t>(v - coder.lo())] / sum);
        coder.advance(v);
    }
    return lp;
}

namespace {

// C(a, b) maintained under small steps of a and b with exact integer updates
struct BinomCursor {
    cpp_int val = 1;
    std::int64_t a = 0, b = 0;

    void set(std::int64_t a0, std::int64_t b0) {
        a = a0;
        b = b0;
        val = 1;
        if (b0 < 0 || b0 > a0) {
            val = 0;
            return;
        }
        const std::int64_t k = std::min(b0, a0 - b0);
        for (std::int64_t i = 1; i <= k; ++i) {
            val *= (a0 - k + i);
            val /= i;
        }
    }

    void dec_a() {  // C(a-1, b) = C(a, b) * (a-b) / a
        val *= (a - b);
        val /= a;
        --a;
    }

    void dec_b() {  // C(a, b-1) = C(a, b) * b / (a-b+1)
        val *= b;
        val /= (a - b + 1);
        --b;
    }
};

cpp_int composition_count(std::int64_t total, std::int64_t parts) {
    if (parts == 0) return total == 0 ? 1 : 0;
    BinomCursor c;
    c.set(total + parts - 1, parts - 1);
    return c.val;
}

} // namespace

std::int64_t composition_rank_bits(std::int64_t total, std::int64_t parts) {
    cpp_int count = composition_count(total, parts);
    if (count <= 1) return 0;
    cpp_int top = count - 1;
    return static_cast<std::int64_t>(boost::multiprecision::msb(top)) + 1;
}

void encode_composition(BitWriter& bw, std::span<const std::int64_t> bins) {
    const std::int64_t parts = static_cast<std::int64_t>(bins.size());
    std::int64_t total = 0;
    for (auto b : bins) {
        if (b < 0) throw domain_error("composition: negative bin");
        total += b;
    }
    const std::int64_t width = composition_rank_bits(total, parts);

    // lexicographic rank: count compositions that are smaller at the first
    // differing bin; the cursor tracks count(rem - t, parts after) under
    // exact small-integer updates
    cpp_int rank = 0;
    std::int64_t rem = total;
    BinomCursor cur;
    if (parts >= 2) cur.set(total + parts - 2, parts - 2);
    for (std::int64_t i = 0; i < parts - 1 && rem > 0; ++i) {
        for (std::int64_t t = 0; t < bins[i]; ++t) {
            rank += cur.val;
            cur.dec_a();
        }
        rem -= bins[i];
        if (i + 2 < parts && rem > 0) {  // bridge to the next bin's cursor
            cur.dec_b();
            cur.dec_a();
        }
    }
    for (std::int64_t i = width - 1; i >= 0; --i)
        bw.put_bit(boost::multiprecision::bit_test(rank, static_cast<unsigned>(i)) ? 1 : 0);
}

std::vector<std::int64_t> decode_composition(BitReader& br, std::int64_t total, std::int64_t parts) {
    const std::int64_t width = composition_rank_bits(total, parts);
    cpp_int rank = 0;
    for (std::int64_t i = 0; i < width; ++i) {
        rank <<= 1;
        if (br.get_bit()) rank |= 1;
    }
    if (rank >= composition_count(total, parts))
        throw decode_error("composition: rank out of range");

    std::vector<std::int64_t> bins(static_cast<std::size_t>(parts), 0);
    std::int64_t rem = total;
    BinomCursor cur;
    if (parts >= 2) cur.set(total + parts - 2, parts - 2);
    for (std::int64_t i = 0; i < parts - 1 && rem > 0; ++i) {
        std::int64_t t = 0;
        while (rank >= cur.val) {
            rank -= cur.val;
            cur.dec_a();
            ++t;
            if (t > rem) throw decode_error("composition: corrupt rank");
        }
        bins[static_cast<std::size_t>(i)] = t;
        rem -= t;
        if (i + 2 < parts && rem > 0) {
            cur.dec_b();
            cur.dec_a();
        }
    }
    if (parts > 0) bins[static_cast<std::size_t>(parts - 1)] += rem;
    return bins;
}

} // namespace graphzip
