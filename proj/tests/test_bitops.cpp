#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "tpset/bitops.hpp"
#include "tpset/corpus.hpp"

using namespace tpset;

TEST(Bitops, LbitExamples) {
    EXPECT_EQ(lbit(1, 0), 0u);
    EXPECT_EQ(lbit(2, 8), 1u);
    EXPECT_EQ(lbit(8, 0), 3u);
    EXPECT_THROW(lbit(5, 5), std::invalid_argument);
}

TEST(Bitops, VbitExamples) {
    EXPECT_EQ(vbit(8, 0), 7u);
    EXPECT_EQ(vbit(0, 8), 6u);
    EXPECT_EQ(vbit(infinity, 5), infinity);
    EXPECT_EQ(vbit(5, infinity), infinity);
}

TEST(Bitops, VbitSwapDiffersInLastBit) {
    lcg64 g(7);
    for (int it = 0; it < 1000; ++it) {
        std::uint64_t x = g.next(), y = g.next();
        if (x == y) continue;
        EXPECT_EQ(vbit(x, y) ^ vbit(y, x), 1u);
    }
}

TEST(Bitops, EncodeAllInfinity) {
    Chunk c = encode_tuple({infinity, infinity}, 3);
    EXPECT_EQ(c.width, 6u);
    EXPECT_EQ(c.words[0], 0b111111u);
}

TEST(Bitops, EncodeZero) {
    Chunk c = encode_tuple({0}, 3);
    EXPECT_EQ(c.width, 3u);
    EXPECT_EQ(c.words[0], 0u);
}

TEST(Bitops, RoundTrip) {
    std::vector<vvalue> v{5, infinity, 2};
    Chunk c = encode_tuple(v, 4);
    EXPECT_EQ(c.width, 12u);
    EXPECT_EQ(decode_tuple(c, 4), v);
    EXPECT_THROW(encode_tuple({15}, 4), std::invalid_argument);
}

TEST(Bitops, ChunkLbitAcrossWords) {
    Chunk a(200), b(200);
    a.set_field(130, 1, 1);
    EXPECT_EQ(lbit(a, b), 130u);
    EXPECT_EQ(vbit(a, b), 261u);
    EXPECT_EQ(vbit(b, a), 260u);
    EXPECT_TRUE(b < a);
}

TEST(Bitops, ChunkMatchesScalar) {
    lcg64 g(3);
    for (int it = 0; it < 1000; ++it) {
        std::uint64_t x = g.next(), y = g.next();
        if (x == y) continue;
        Chunk a(64), b(64);
        a.words[0] = x;
        b.words[0] = y;
        EXPECT_EQ(vbit(a, b), vbit(x, y));
    }
}

// Adjacent-distinct sequences over [0..2^u) map to adjacent-distinct sequences over [0..2u).
static bool reduction_ok(const std::vector<std::uint64_t>& a, unsigned u) {
    std::vector<std::uint64_t> b;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) b.push_back(vbit(a[i], a[i + 1]));
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] >= 2 * u) return false;
        if (i + 1 < b.size() && b[i] == b[i + 1]) return false;
    }
    return true;
}

TEST(Bitops, ColeVishkinExhaustive) {
    std::size_t count = 0;
    for (unsigned u = 1; u <= 4; ++u) {
        std::uint64_t base = std::uint64_t{1} << u;
        for (unsigned m = 2; m <= 5; ++m) {
            std::vector<std::uint64_t> a(m, 0);
            std::uint64_t total = 1;
            for (unsigned i = 0; i < m; ++i) total *= base;
            for (std::uint64_t code = 0; code < total; ++code) {
                std::uint64_t c = code;
                for (unsigned i = 0; i < m; ++i) {
                    a[i] = c % base;
                    c /= base;
                }
                bool distinct = true;
                for (unsigned i = 0; i + 1 < m; ++i) distinct = distinct && a[i] != a[i + 1];
                if (!distinct) continue;
                ASSERT_TRUE(reduction_ok(a, u));
                ++count;
            }
        }
    }
    EXPECT_GT(count, 0u);
}

TEST(Bitops, ColeVishkinRandom) {
    lcg64 g(11);
    for (int it = 0; it < 10000; ++it) {
        unsigned u = 1 + g.below(40);
        std::size_t m = 2 + g.below(50);
        std::uint64_t mask = (std::uint64_t{1} << u) - 1;
        std::vector<std::uint64_t> a;
        while (a.size() < m) {
            std::uint64_t x = ((std::uint64_t{g.next()} << 32) | g.next()) & mask;
            if (!a.empty() && a.back() == x) continue;
            a.push_back(x);
        }
        ASSERT_TRUE(reduction_ok(a, u));
    }
}
