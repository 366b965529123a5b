#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "tpset/corpus.hpp"
#include "tpset/oracle.hpp"
#include "tpset/partition.hpp"
#include "tpset/sparsify.hpp"

using namespace tpset;

namespace {

struct instance {
    Text text;
    std::size_t tau;
};

std::vector<instance> corpus() {
    std::vector<instance> out;
    std::uint64_t seed = 100;
    for (std::size_t n : {256, 700, 1024})
        for (std::uint32_t sigma : {2u, 4u, 256u})
            for (std::size_t tau : {8, 32, 64})
                if (tau <= n / 4) out.push_back({Text(gen::random(n, sigma, seed++)), tau});
    for (std::size_t tau : {16, 64, 128}) {
        out.push_back({gen::as_letters(gen::fibonacci(987)), tau});
        out.push_back({Text(gen::runs(800, 2, tau)), tau});
        out.push_back({Text(gen::periodic(600, 3, 5, tau)), tau});
        std::vector<std::uint32_t> mixed = gen::random(200, 4, tau);
        for (int r = 0; r < 70; ++r)
            for (std::uint32_t c : {1u, 2u, 3u}) mixed.push_back(c);
        auto tail = gen::random(300, 4, tau + 1);
        mixed.insert(mixed.end(), tail.begin(), tail.end());
        out.push_back({Text(mixed), tau});
    }
    return out;
}

ParamEnv desk(const Text& t, std::size_t tau, unsigned l4 = 10) {
    param_overrides ov;
    ov.lambda4 = l4;
    return make_params(t, tau, mode::desk, ov);
}

r_sequence build_r(const Text& t, const ParamEnv& p, std::vector<std::size_t>* sprime = nullptr) {
    r_sequence R;
    collect_sink c;
    front_end fe(t, p, c, &R);
    run_pipeline(t, p, fe);
    R.assign_ids();
    if (sprime) *sprime = c.out;
    return R;
}

} // namespace

TEST(Stage1, DistinctWindowsKeepEverything) {
    Text t(gen::random(512, 256, 5));
    ParamEnv p = desk(t, 16);
    auto s = refine_positions(t, p);
    EXPECT_EQ(compute_sprime(t, p), s);
}

TEST(Stage1, UnaryRemovesEveryClosePosition) {
    Text t(std::vector<std::uint32_t>(300, 0));
    ParamEnv p = desk(t, 32);
    auto s = refine_positions(t, p);
    auto sp = compute_sprime(t, p);
    EXPECT_EQ(sp, oracle::direct_stage1(t, s, 32));
    for (std::size_t k = 1; k < s.size(); ++k) {
        bool close = s[k] - s[k - 1] <= 8;
        // the windows at the very end run into the sentinel and stay distinct
        if (close && s[k] + 16 < 300) {
            EXPECT_FALSE(std::binary_search(sp.begin(), sp.end(), s[k])) << s[k];
        }
    }
}

TEST(Stage1, MatchesDirectDefinition) {
    for (const auto& in : corpus()) {
        ParamEnv p = desk(in.text, in.tau);
        auto s = oracle::direct_refine(in.text, p);
        EXPECT_EQ(compute_sprime(in.text, p), oracle::direct_stage1(in.text, s, in.tau))
            << "n=" << in.text.size() << " tau=" << in.tau;
    }
}

TEST(Stage1, EmptyInput) {
    Text t(gen::random(64, 2, 1));
    EXPECT_TRUE(oracle::direct_stage1(t, {}, 8).empty());
}

TEST(Stage1, AlmostPartitioning) {
    for (const auto& in : corpus()) {
        ParamEnv p = desk(in.text, in.tau);
        auto sp = compute_sprime(in.text, p);
        std::size_t t34 = 3 * in.tau / 4;
        EXPECT_TRUE(oracle::check_property_a(in.text, sp, t34).holds);
        EXPECT_TRUE(oracle::check_property_b(in.text, sp, t34).holds);
        EXPECT_TRUE(oracle::check_property_c(in.text, sp, in.tau).holds);
        EXPECT_TRUE(oracle::check_c_converse(in.text, sp, in.tau, t34).holds);
    }
}

TEST(Letters, MatchDirectConstruction) {
    for (const auto& in : corpus()) {
        if (in.tau < 32) continue;
        ParamEnv p = desk(in.text, in.tau);
        std::vector<std::size_t> sp;
        r_sequence R = build_r(in.text, p, &sp);
        ASSERT_EQ(R.size(), sp.size());
        EXPECT_EQ(R.origin, sp);
        letter_shape sh = make_letter_shape(p);
        auto direct = oracle::direct_letters(in.text, sp, in.tau, sh.ell, sh.field);
        ASSERT_EQ(direct.size(), R.letters.size());
        for (std::size_t i = 0; i < direct.size(); ++i) ASSERT_TRUE(direct[i] == R.letters[i]) << i;
    }
}

TEST(Letters, IsolatedPositionIsAllInfinity) {
    Text t(gen::random(512, 256, 3));
    ParamEnv p = desk(t, 16); // reach 0: nobody has neighbours
    r_sequence R = build_r(t, p);
    letter_shape sh = make_letter_shape(p);
    for (const auto& a : R.letters)
        for (auto v : decode_tuple(a, sh.field[3])) ASSERT_EQ(v, infinity);
}

TEST(Letters, CloseLettersDiffer) {
    for (const auto& in : corpus()) {
        if (in.tau < 32 || in.text.size() > 1024) continue;
        ParamEnv p = desk(in.text, in.tau);
        r_sequence R = build_r(in.text, p);
        for (std::size_t i = 0; i < R.size(); ++i)
            for (std::size_t k = i + 1; k < R.size() && R.origin[k] - R.origin[i] <= (in.tau >> 5); ++k)
                ASSERT_NE(R.ids[i], R.ids[k]);
    }
}

TEST(Letters, EqualContextsGiveEqualLetters) {
    for (const auto& in : corpus()) {
        if (in.tau < 32 || in.text.size() > 1024) continue;
        const Text& t = in.text;
        ParamEnv p = desk(t, in.tau);
        r_sequence R = build_r(t, p);
        std::vector<char> in_sp(t.size() + in.tau, 0);
        for (auto x : R.origin) in_sp[x] = 1;
        std::size_t ctx = 7 * in.tau / 8;
        std::size_t checked = 0;
        for (std::size_t a = 0; a < R.size(); ++a)
            for (std::size_t b = a + 1; b < R.size(); ++b) {
                std::size_t x = R.origin[a], y = R.origin[b];
                if (oracle::naive_lce(t, x, y) < ctx + 1) continue;
                bool aligned = true;
                for (std::size_t d = 0; d <= ctx && aligned; ++d) aligned = in_sp[x + d] == in_sp[y + d];
                if (!aligned) continue;
                ++checked;
                ASSERT_EQ(R.ids[a], R.ids[b]) << x << " " << y;
            }
        (void)checked;
    }
}

TEST(Letters, MArraysCountNeighbours) {
    for (const auto& in : corpus()) {
        ParamEnv p = desk(in.text, in.tau);
        r_sequence R = build_r(in.text, p);
        ASSERT_EQ(R.mwidth, 11u);
        for (std::size_t i = 0; i < R.size(); ++i)
            for (std::size_t j = 0; j < R.mwidth; ++j) {
                std::size_t c = 0;
                for (std::size_t k = i + 1; k < R.size() && R.origin[k] <= R.origin[i] + (in.tau >> j); ++k) ++c;
                ASSERT_EQ(R.M(i, j), c);
                if (j > 0) {
                    ASSERT_LE(R.M(i, j), R.M(i, j - 1));
                }
                if (i + 1 < R.size()) {
                    ASSERT_LE(R.M(i, j), R.M(i + 1, j) + 1);
                }
            }
    }
}

TEST(GreedyCut, TwoLetters) {
    pair_weights P{{{0, 1}, 5}, {{1, 0}, 3}};
    auto c = greedy_cut(P);
    EXPECT_EQ(c.acute, std::vector<std::uint32_t>{0});
    EXPECT_EQ(c.grave, std::vector<std::uint32_t>{1});
    EXPECT_EQ(c.forward, 5u);
    // brute force over the four bipartitions: best directed weight is 5
    std::uint64_t best = 0;
    for (int mask = 0; mask < 4; ++mask) {
        std::uint64_t w = 0;
        for (auto& [ab, x] : P)
            if ((mask >> ab.first & 1) && !(mask >> ab.second & 1)) w += x;
        best = std::max(best, w);
    }
    EXPECT_EQ(best, c.forward);
    EXPECT_GE(4 * c.forward, c.total);
}

TEST(GreedyCut, EmptyMatrix) {
    auto c = greedy_cut({});
    EXPECT_EQ(c.forward, 0u);
    EXPECT_EQ(c.total, 0u);
}

TEST(GreedyCut, QuarterGuaranteeOnRandomMatrices) {
    lcg64 g(42);
    for (int trial = 0; trial < 2000; ++trial) {
        pair_weights P;
        for (std::uint32_t a = 0; a < 8; ++a)
            for (std::uint32_t b = 0; b < 8; ++b)
                if (a != b && g.below(4) == 0) P[{a, b}] = 1 + g.below(9);
        auto c = greedy_cut(P);
        std::uint64_t total = 0;
        for (auto& [ab, w] : P) total += w;
        ASSERT_EQ(c.total, total);
        ASSERT_GE(4 * c.forward, total);
        std::set<std::uint32_t> a(c.acute.begin(), c.acute.end());
        for (auto x : c.grave) ASSERT_FALSE(a.count(x));
    }
}

TEST(Recompress, NoEligiblePairsLeavesR) {
    Text t(gen::random(512, 256, 9));
    ParamEnv p = desk(t, 16);
    r_sequence R = build_r(t, p);
    auto before = R.source;
    auto st = recompress_step(R, 6);
    EXPECT_EQ(st.eligible_before, 0u);
    EXPECT_EQ(R.source, before);
}

TEST(Recompress, StepsShrinkAndKeepMConsistent) {
    std::size_t steps = 0, removed = 0;
    for (const auto& in : corpus()) {
        if (in.tau < 64) continue;
        ParamEnv p = desk(in.text, in.tau);
        r_sequence R = build_r(in.text, p);
        for (unsigned j = 10; j >= 6; --j)
            for (int it = 0; it < 3; ++it) {
                std::set<std::size_t> first_guard;
                std::vector<std::uint32_t> src_before = R.source;
                std::vector<char> guard(R.size(), 0);
                for (std::size_t i = 0; i < R.size(); ++i) guard[i] = i == 0 || R.M(i - 1, 5) == 0;
                auto st = recompress_step(R, j);
                ++steps;
                removed += st.removed;
                ASSERT_LE(4 * st.eligible_after, 3 * st.eligible_before);
                // guarded letters survive
                for (std::size_t i = 0; i < src_before.size(); ++i)
                    if (guard[i]) {
                        ASSERT_TRUE(std::binary_search(R.source.begin(), R.source.end(), src_before[i]));
                    }
                // M recount from the surviving origins
                for (std::size_t i = 0; i < R.size(); ++i)
                    for (std::size_t jj = 0; jj < R.mwidth; ++jj) {
                        std::size_t c = 0;
                        for (std::size_t k = i + 1; k < R.size() && R.origin[k] <= R.origin[i] + (in.tau >> jj); ++k)
                            ++c;
                        ASSERT_EQ(R.M(i, jj), c);
                    }
            }
    }
    EXPECT_GT(steps, 0u);
    EXPECT_GT(removed, 0u);
}

TEST(Recompress, LoopRespectsBounds) {
    for (const auto& in : corpus()) {
        for (unsigned forced : {0u, 3u}) {
            ParamEnv p = desk(in.text, in.tau, 8);
            r_sequence R = build_r(in.text, p);
            recompress_options o;
            o.force_steps = forced;
            recompress_stats st;
            auto keep = recompress_loop(R, p, o, &st);
            EXPECT_EQ(keep.size(), st.initial_length);
            EXPECT_LE(st.final_length * in.tau, (std::size_t{1} << 16) * in.text.size());
            for (auto [j, it] : st.iterations) EXPECT_LE(it, 3u);
            EXPECT_EQ(st.iterations.size(), 3u); // j = 8, 7, 6
            for (const auto& s : st.steps) EXPECT_LE(4 * s.eligible_after, 3 * s.eligible_before);
        }
    }
}

TEST(Recompress, ReferenceRangeIsEmpty) {
    Text t(gen::random(4096, 4, 1));
    ParamEnv p = make_params(t, 64, mode::reference);
    auto [lo, hi] = recompress_range(p);
    EXPECT_LT(hi, lo);
}

TEST(Replay, AllOnesMaskGivesSprime) {
    Text t(gen::runs(900, 3, 4));
    ParamEnv p = desk(t, 32);
    auto sp = compute_sprime(t, p);
    std::vector<char> ones(sp.size(), 1);
    EXPECT_EQ(replay_to_sstar(t, p, ones), sp);
    std::vector<char> short_mask(sp.size() - 1, 1);
    EXPECT_THROW(replay_to_sstar(t, p, short_mask), invariant_error);
}

TEST(Partition, ReplayMatchesDirectAndIsDeterministic) {
    for (const auto& in : corpus()) {
        ParamEnv p = desk(in.text, in.tau);
        partition_options o;
        o.recompress.force_steps = 3;
        auto a = build_partition(in.text, p, o);
        auto b = build_partition(in.text, p, o);
        EXPECT_EQ(a.sstar, b.sstar);
        EXPECT_EQ(a.keep, b.keep);
        o.replay = true;
        partition_stats st;
        auto c = build_partition(in.text, p, o, &st);
        EXPECT_TRUE(st.replayed);
        EXPECT_EQ(c.sstar, a.sstar);
    }
}

TEST(Partition, FinalSetIsPartitioning) {
    for (const auto& in : corpus()) {
        for (unsigned forced : {0u, 3u}) {
            ParamEnv p = desk(in.text, in.tau);
            partition_options o;
            o.recompress.force_steps = forced;
            auto r = build_partition(in.text, p, o);
            const auto& s = r.sstar;
            auto tag = ::testing::Message() << "n=" << in.text.size() << " tau=" << in.tau << " forced=" << forced;
            auto pa = oracle::check_property_a(in.text, s, in.tau);
            EXPECT_TRUE(pa.holds) << tag << pa.to_text();
            auto pb = oracle::check_property_b(in.text, s, in.tau);
            EXPECT_TRUE(pb.holds) << tag << pb.to_text();
            auto pc = oracle::check_property_c(in.text, s, in.tau);
            EXPECT_TRUE(pc.holds) << tag << pc.to_text();
            auto cc = oracle::check_c_converse(in.text, s, in.tau, in.tau);
            EXPECT_TRUE(cc.holds) << tag << cc.to_text();
        }
    }
}

TEST(Partition, ReferenceModeUsesReplay) {
    Text t(gen::random(2048, 4, 12));
    ParamEnv p = make_params(t, 256, mode::reference);
    partition_stats st;
    auto r = build_partition(t, p, {}, &st);
    EXPECT_TRUE(st.replayed);
    EXPECT_EQ(r.sstar, compute_sprime(t, p));
    EXPECT_LE(st.sstar_size, st.sprime_size);
    EXPECT_LE(st.sprime_size, st.s_size);
}
