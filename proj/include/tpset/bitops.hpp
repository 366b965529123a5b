#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tpset {

/// Scalar value of the v-chains; `infinity` is a tagged value that absorbs vbit.
using vvalue = std::uint64_t;
inline constexpr vvalue infinity = std::numeric_limits<vvalue>::max();

/// Index of the lowest bit in which x and y differ. Requires x != y.
inline unsigned lbit(std::uint64_t x, std::uint64_t y) {
    if (x == y) throw std::invalid_argument("lbit of equal values");
    return static_cast<unsigned>(std::countr_zero(x ^ y));
}

/// 2*lbit(x,y) + (bit lbit(x,y) of x); infinity if either argument is.
inline vvalue vbit(vvalue x, vvalue y) {
    if (x == infinity || y == infinity) return infinity;
    unsigned l = lbit(x, y);
    return 2 * vvalue{l} + ((x >> l) & 1);
}

/// Variable-length bit string, bit 0 first.
struct Chunk {
    std::vector<std::uint64_t> words;
    std::size_t width = 0;

    Chunk() = default;
    explicit Chunk(std::size_t bits) : words((bits + 63) / 64, 0), width(bits) {}

    bool bit(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1; }

    void set_field(std::size_t offset, unsigned fw, std::uint64_t v) {
        for (unsigned b = 0; b < fw; ++b) {
            std::size_t i = offset + b;
            if ((v >> b) & 1) words[i / 64] |= std::uint64_t{1} << (i % 64);
            else words[i / 64] &= ~(std::uint64_t{1} << (i % 64));
        }
    }

    std::uint64_t get_field(std::size_t offset, unsigned fw) const {
        std::uint64_t v = 0;
        for (unsigned b = 0; b < fw; ++b)
            if (bit(offset + b)) v |= std::uint64_t{1} << b;
        return v;
    }

    friend bool operator==(const Chunk& a, const Chunk& b) {
        return a.width == b.width && a.words == b.words;
    }

    /// Numeric order (most significant word first).
    friend bool operator<(const Chunk& a, const Chunk& b) {
        std::size_t m = std::max(a.words.size(), b.words.size());
        for (std::size_t i = m; i-- > 0;) {
            std::uint64_t x = i < a.words.size() ? a.words[i] : 0;
            std::uint64_t y = i < b.words.size() ? b.words[i] : 0;
            if (x != y) return x < y;
        }
        return false;
    }
};

/// Lowest differing bit of two chunks read as numbers. Requires them to differ.
inline std::size_t lbit(const Chunk& x, const Chunk& y) {
    std::size_t m = std::max(x.words.size(), y.words.size());
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t a = i < x.words.size() ? x.words[i] : 0;
        std::uint64_t b = i < y.words.size() ? y.words[i] : 0;
        if (a != b) return 64 * i + static_cast<std::size_t>(std::countr_zero(a ^ b));
    }
    throw std::invalid_argument("lbit of equal chunks");
}

inline vvalue vbit(const Chunk& x, const Chunk& y) {
    std::size_t l = lbit(x, y);
    bool xb = l / 64 < x.words.size() && x.bit(l);
    return 2 * vvalue{l} + (xb ? 1 : 0);
}

/// Smallest field width whose all-ones pattern exceeds every value below `bound`.
inline unsigned field_width_for(std::uint64_t bound) {
    return static_cast<unsigned>(std::max<std::uint64_t>(1, std::bit_width(bound)));
}

/// Packs values into consecutive fields; infinity becomes the all-ones field.
inline Chunk encode_tuple(const std::vector<vvalue>& values, unsigned fw) {
    if (fw == 0 || fw > 64) throw std::invalid_argument("field width out of range");
    std::uint64_t ones = fw == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fw) - 1;
    Chunk c(values.size() * fw);
    for (std::size_t i = 0; i < values.size(); ++i) {
        vvalue v = values[i];
        if (v == infinity) v = ones;
        else if (v >= ones) throw std::invalid_argument("value does not fit its field");
        c.set_field(i * fw, fw, v);
    }
    return c;
}

inline std::vector<vvalue> decode_tuple(const Chunk& c, unsigned fw) {
    if (fw == 0 || fw > 64 || c.width % fw != 0) throw std::invalid_argument("bad field width");
    std::uint64_t ones = fw == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fw) - 1;
    std::vector<vvalue> out(c.width / fw);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = c.get_field(i * fw, fw);
        out[i] = v == ones ? infinity : v;
    }
    return out;
}

} // namespace tpset
