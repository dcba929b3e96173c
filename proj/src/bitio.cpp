#include "graphzip/bitio.hpp"

#include <bit>

namespace graphzip {

namespace {

int bit_width_u64(std::uint64_t v) {
    return 64 - std::countl_zero(v);
}

} // namespace

void elias_delta_encode(BitWriter& bw, std::uint64_t v) {
    if (v == 0) throw domain_error("elias delta: value must be positive");
    const int nb = bit_width_u64(v);        // bits in v
    const int lb = bit_width_u64(static_cast<std::uint64_t>(nb)); // bits in nb
    for (int i = 0; i < lb - 1; ++i) bw.put_bit(0);
    bw.put_bits(static_cast<std::uint64_t>(nb), lb);
    if (nb > 1) bw.put_bits(v & ((std::uint64_t{1} << (nb - 1)) - 1), nb - 1);
}

std::uint64_t elias_delta_decode(BitReader& br) {
    int zeros = 0;
    while (br.get_bit() == 0) {
        if (++zeros > 63) throw decode_error("elias delta: malformed prefix");
    }
    std::uint64_t nb = 1;
    for (int i = 0; i < zeros; ++i) nb = (nb << 1) | static_cast<std::uint64_t>(br.get_bit());
    if (nb > 64) throw decode_error("elias delta: length overflow");
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i < nb; ++i) v = (v << 1) | static_cast<std::uint64_t>(br.get_bit());
    return v;
}

int elias_delta_length(std::uint64_t v) {
    if (v == 0) throw domain_error("elias delta: value must be positive");
    const int nb = bit_width_u64(v);
    const int lb = bit_width_u64(static_cast<std::uint64_t>(nb));
    return (lb - 1) + lb + (nb - 1);
}

} // namespace graphzip
