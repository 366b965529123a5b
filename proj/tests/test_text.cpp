#include <gtest/gtest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "tpset/text.hpp"

using namespace tpset;

TEST(Text, BytesAbab) {
    std::vector<std::byte> raw{std::byte{'a'}, std::byte{'b'}, std::byte{'a'}, std::byte{'b'}};
    Text t = load_text(raw, text_format::bytes);
    EXPECT_EQ(t.size(), 4u);
    EXPECT_EQ(t.at(0), 97);
    EXPECT_EQ(t.at(1), 98);
    EXPECT_EQ(t.w(), 7u);
}

TEST(Text, U32SingleZero) {
    std::vector<std::byte> raw(4, std::byte{0});
    Text t = load_text(raw, text_format::u32le);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.at(0), 0);
    EXPECT_EQ(t.w(), 1u);
}

TEST(Text, U32LittleEndian) {
    std::vector<std::byte> raw{std::byte{1}, std::byte{2}, std::byte{0}, std::byte{0}};
    Text t = load_text(raw, text_format::u32le);
    EXPECT_EQ(t.at(0), 0x0201);
}

TEST(Text, U32BadLength) {
    std::vector<std::byte> raw(5, std::byte{0});
    EXPECT_THROW(load_text(raw, text_format::u32le), std::invalid_argument);
}

TEST(Text, SentinelReads) {
    Text t = Text::from_string("abc");
    EXPECT_EQ(t.at(3), -1);
    EXPECT_EQ(t.at(100), -1);
    EXPECT_EQ(t.code(3), t.sigma_bound());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NE(t.code(i), t.code(3));
}

// lambda3 recomputed with real-valued logs: v < 2*ceil(log2 B) rounds.
static unsigned lambda3_by_logs(double n, double w) {
    double bound = 2 * n * w;
    for (int r = 0; r < 3; ++r) bound = 2 * std::ceil(std::log2(bound));
    unsigned l = 2;
    while (bound > 2.0 * l + 3) ++l;
    return l;
}

TEST(Params, Reference2p20) {
    std::size_t n = std::size_t{1} << 20;
    ParamEnv p = make_params(n, 8, 1024, mode::reference);
    EXPECT_EQ(p.lambda3, lambda3_by_logs(static_cast<double>(n), 8));
    EXPECT_EQ(p.lambda3, 3u);
    unsigned k = static_cast<unsigned>(std::floor(std::log2(1024.0 / (16.0 * p.lambda3))));
    EXPECT_EQ(p.phase_count, k);
    EXPECT_EQ(p.phase_count, 4u);
    EXPECT_LE((std::size_t{1} << (p.phase_count + 3)) * p.lambda3, 1024u / 2);
}

TEST(Params, SmallTauClampsToZeroPhases) {
    ParamEnv p = make_params(100, 7, 4, mode::reference);
    EXPECT_EQ(p.phase_count, 0u);
}

TEST(Params, DeskLambda4Override) {
    param_overrides ov;
    ov.lambda4 = 10;
    ParamEnv p = make_params(100, 7, 4, mode::desk, ov);
    EXPECT_EQ(p.lambda4, 10u);
    EXPECT_GE(p.lambda4, 6u); // j-range [6..10] is non-empty
    EXPECT_LT(make_params(100, 7, 4, mode::reference).lambda4, 6u);
}

TEST(Params, RangeChecks) {
    EXPECT_THROW(make_params(100, 7, 3, mode::desk), std::invalid_argument);
    EXPECT_THROW(make_params(100, 7, 51, mode::desk), std::invalid_argument);
    EXPECT_NO_THROW(make_params(100, 7, 50, mode::desk));
    param_overrides ov;
    ov.lambda3 = 4;
    EXPECT_THROW(make_params(100, 7, 8, mode::reference, ov), std::invalid_argument);
}

TEST(Params, PhaseCountInvariant) {
    for (std::size_t tau = 4; tau <= 1 << 14; tau = tau * 3 / 2 + 1) {
        ParamEnv p = make_params(1 << 16, 8, tau, mode::desk);
        if (p.phase_count >= 1) { EXPECT_LE((std::size_t{1} << (p.phase_count + 3)) * p.lambda3, tau / 2); }
    }
}
