#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "graphzip/errors.hpp"

namespace graphzip {

// Byte-wise 64-bit range coder. Frequencies are integers with total <= 2^30;
// renormalization keeps range >= 2^56 so the division never starves. The
// termination sequence costs at most 16 bits beyond the ideal codelength.
class RangeEncoder {
public:
    static constexpr std::uint32_t kMaxTotal = 1u << 30;

    void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
        const std::uint64_t r = range_ / total;
        const std::uint64_t add = r * cum;
        if (low_ + add < low_) propagate_carry();
        low_ += add;
        range_ = r * freq;
        ideal_bits_ += std::log2(static_cast<double>(total) / static_cast<double>(freq));
        while (range_ < kTop) {
            out_.push_back(static_cast<std::uint8_t>(low_ >> 56));
            low_ <<= 8;
            range_ <<= 8;
        }
    }

    std::vector<std::uint8_t> finish() {
        // emit the top 16 bits of the smallest multiple of 2^48 inside the
        // interval; the decoder zero-pads past the end of the stream
        const std::uint64_t mask = (std::uint64_t{1} << 48) - 1;
        std::uint64_t t = (low_ + mask) & ~mask;
        if (t < low_) propagate_carry();  // rounding wrapped past 2^64
        out_.push_back(static_cast<std::uint8_t>(t >> 56));
        out_.push_back(static_cast<std::uint8_t>(t >> 48));
        low_ = 0;
        range_ = ~std::uint64_t{0};
        return std::move(out_);
    }

    double ideal_bits() const { return ideal_bits_; }

private:
    static constexpr std::uint64_t kTop = std::uint64_t{1} << 56;

    void propagate_carry() {
        auto i = out_.size();
        while (i > 0 && out_[i - 1] == 0xFF) out_[--i] = 0;
        if (i == 0) throw error("range encoder: carry out of stream");
        out_[i - 1]++;
    }

    std::uint64_t low_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
    std::vector<std::uint8_t> out_;
    double ideal_bits_ = 0.0;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
        for (int i = 0; i < 8; ++i) code_ = (code_ << 8) | next_byte();
    }

    // cumulative target in [0, total); caller locates the symbol interval
    std::uint32_t decode_target(std::uint32_t total) {
        r_ = range_ / total;
        std::uint64_t t = code_ / r_;
        return static_cast<std::uint32_t>(std::min<std::uint64_t>(t, total - 1));
    }

    void decode_update(std::uint32_t cum, std::uint32_t freq) {
        code_ -= r_ * cum;
        range_ = r_ * freq;
        while (range_ < kTop) {
            code_ = (code_ << 8) | next_byte();
            range_ <<= 8;
        }
    }

    // bytes of the stream actually consumed (excludes zero padding)
    std::int64_t bytes_consumed() const { return std::min<std::int64_t>(pos_, static_cast<std::int64_t>(bytes_.size())); }

private:
    static constexpr std::uint64_t kTop = std::uint64_t{1} << 56;

    std::uint64_t next_byte() {
        if (pos_ < static_cast<std::int64_t>(bytes_.size())) return bytes_[static_cast<std::size_t>(pos_++)];
        ++pos_;
        return 0;
    }

    std::span<const std::uint8_t> bytes_;
    std::uint64_t code_ = 0;
    std::uint64_t range_ = ~std::uint64_t{0};
    std::uint64_t r_ = 0;
    std::int64_t pos_ = 0;
};

// Integer frequency table over symbols 0..size-1 with strictly increasing
// cumulative counts; every symbol keeps frequency >= 1 so any value in the
// support stays decodable even when its model weight underflows.
class FrequencyModel {
public:
    FrequencyModel() = default;

    static FrequencyModel from_counts(std::span<const std::uint64_t> counts);
    static FrequencyModel from_weights(std::span<const double> weights);

    int size() const { return static_cast<int>(cum_.size()) - 1; }
    std::uint32_t total() const { return cum_.back(); }
    std::uint32_t freq(int sym) const { return cum_[sym + 1] - cum_[sym]; }
    double prob(int sym) const { return static_cast<double>(freq(sym)) / total(); }

    void encode(RangeEncoder& enc, int sym) const {
        if (sym < 0 || sym >= size()) throw domain_error("frequency model: symbol out of range");
        enc.encode(cum_[sym], freq(sym), total());
    }

    int decode(RangeDecoder& dec) const {
        const std::uint32_t target = dec.decode_target(total());
        int sym = static_cast<int>(std::upper_bound(cum_.begin(), cum_.end(), target) - cum_.begin()) - 1;
        dec.decode_update(cum_[sym], freq(sym));
        return sym;
    }

private:
    std::vector<std::uint32_t> cum_;  // size+1 entries, cum_[0] = 0
};

inline FrequencyModel FrequencyModel::from_counts(std::span<const std::uint64_t> counts) {
    if (counts.empty()) throw domain_error("frequency model: empty support");
    std::uint64_t sum = 0;
    std::uint64_t mn = ~std::uint64_t{0};
    for (auto c : counts) {
        sum += c;
        mn = std::min(mn, c);
    }
    if (sum == 0) throw domain_error("frequency model: all-zero counts");
    FrequencyModel m;
    m.cum_.resize(counts.size() + 1, 0);
    if (mn >= 1 && sum <= RangeEncoder::kMaxTotal) {
        for (std::size_t i = 0; i < counts.size(); ++i)
            m.cum_[i + 1] = m.cum_[i] + static_cast<std::uint32_t>(counts[i]);
        return m;
    }
    const double scale = static_cast<double>(RangeEncoder::kMaxTotal - counts.size()) / static_cast<double>(sum);
    for (std::size_t i = 0; i < counts.size(); ++i)
        m.cum_[i + 1] = m.cum_[i] + 1u + static_cast<std::uint32_t>(static_cast<double>(counts[i]) * scale);
    return m;
}

inline FrequencyModel FrequencyModel::from_weights(std::span<const double> weights) {
    if (weights.empty()) throw domain_error("frequency model: empty support");
    double sum = 0.0;
    for (double w : weights)
        if (w > 0.0 && std::isfinite(w)) sum += w;
    FrequencyModel m;
    m.cum_.resize(weights.size() + 1, 0);
    const double budget = static_cast<double>(RangeEncoder::kMaxTotal - weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::uint32_t f = 1;
        if (sum > 0.0 && weights[i] > 0.0 && std::isfinite(weights[i]))
            f += static_cast<std::uint32_t>(weights[i] / sum * budget);
        m.cum_[i + 1] = m.cum_[i] + f;
    }
    return m;
}

} // namespace graphzip
