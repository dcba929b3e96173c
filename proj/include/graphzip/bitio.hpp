#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphzip/errors.hpp"

namespace graphzip {

// MSB-first bit packing into a byte vector.
class BitWriter {
public:
    void put_bit(int b) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - nbits_ % 8));
        ++nbits_;
    }

    void put_bits(std::uint64_t value, int width) {
        for (int i = width - 1; i >= 0; --i) put_bit(static_cast<int>((value >> i) & 1));
    }

    void align_to_byte() {
        while (nbits_ % 8 != 0) put_bit(0);
    }

    std::int64_t bit_count() const { return nbits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take() { nbits_ = 0; return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::int64_t nbits_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    int get_bit() {
        if (pos_ >= static_cast<std::int64_t>(bytes_.size()) * 8)
            throw decode_error("bit reader: out of data");
        int b = (bytes_[static_cast<std::size_t>(pos_ / 8)] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }

    std::uint64_t get_bits(int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
        return v;
    }

    void align_to_byte() {
        while (pos_ % 8 != 0) ++pos_;
    }

    std::int64_t bit_position() const { return pos_; }
    std::int64_t byte_position() const { return (pos_ + 7) / 8; }

private:
    std::span<const std::uint8_t> bytes_;
    std::int64_t pos_ = 0;
};

// Elias delta code for v >= 1: prefix-free, 1 bit for v=1,
// |code| = floor(log2 v) + 2 floor(log2(floor(log2 v)+1)) + 1.
void elias_delta_encode(BitWriter& bw, std::uint64_t v);
std::uint64_t elias_delta_decode(BitReader& br);
int elias_delta_length(std::uint64_t v);

} // namespace graphzip
