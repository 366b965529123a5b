#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "tpset/corpus.hpp"
#include "tpset/oracle.hpp"
#include "tpset/sparse_tree.hpp"

using namespace tpset;

namespace {

std::vector<std::size_t> every(std::size_t n, std::size_t step, std::size_t from = 0) {
    std::vector<std::size_t> v;
    for (std::size_t i = from; i < n; i += step) v.push_back(i);
    return v;
}

void expect_matches_oracle(const text_range& r, const std::vector<std::size_t>& pos, const sparse_tree& t) {
    std::string want = oracle::canonical_trie(r, pos);
    EXPECT_EQ(oracle::canonical_form(r, t), want);
    EXPECT_EQ(oracle::canonical_form(r, oracle::oracle_trie(r, pos)), want);
    EXPECT_EQ(t.leaf_order(), oracle::naive_suffix_sort(r, pos));
}

} // namespace

TEST(SparseTree, EveryTauthPositionRandomText) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Text t = gen::as_letters(gen::random(600, 2 + seed % 3, seed));
        text_range r(t);
        for (std::size_t tau : {1u, 4u, 8u, 16u}) {
            auto pos = every(t.size(), tau);
            sparse_tree_options opt;
            opt.verify = true;
            auto tree = build_sparse_tree(r, pos, tau, opt);
            expect_matches_oracle(r, pos, tree);
        }
    }
}

TEST(SparseTree, RadixAgreesWithMultikey) {
    Text t = gen::as_letters(gen::random(400, 4, 2));
    text_range r(t);
    auto pos = every(t.size(), 4);
    sparse_tree_options a, b;
    b.sorting = sort_method::radix;
    EXPECT_EQ(build_sparse_tree(r, pos, 4, a).serialize(), build_sparse_tree(r, pos, 4, b).serialize());
    auto [ra, da] = rank_windows(r, pos, 9, sort_method::multikey);
    auto [rb, db] = rank_windows(r, pos, 9, sort_method::radix);
    EXPECT_EQ(ra, rb);
    EXPECT_EQ(da, db);
}

TEST(SparseTree, SinglePosition) {
    Text t = Text::from_string("abcabc");
    text_range r(t);
    auto tree = build_sparse_tree(r, {2}, 4);
    ASSERT_EQ(tree.nodes().size(), 2u);
    EXPECT_EQ(tree.nodes()[1].parent, 0);
    EXPECT_EQ(tree.nodes()[1].leaf, 2);
    EXPECT_EQ(tree.serialize(), "node 0 parent -1 edge 0 0\nnode 1 parent 0 edge 2 5 leaf 2\n");
}

TEST(SparseTree, SentinelBranch) {
    // "ab" at 2 is a prefix of "abab" at 0: they split at depth 2 on the sentinel
    Text t = Text::from_string("abab");
    text_range r(t);
    auto tree = build_sparse_tree(r, {0, 2}, 4);
    expect_matches_oracle(r, {0, 2}, tree);
    ASSERT_EQ(tree.nodes().size(), 4u);
    EXPECT_EQ(tree.nodes()[1].depth, 2u);
    EXPECT_EQ(tree.leaf_order(), (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(tree.lce(0, 2), 2u);
}

TEST(SparseTree, Banana) {
    Text t = Text::from_string("banana");
    text_range r(t);
    auto pos = every(6, 1);
    auto tree = build_sparse_tree(r, pos, 1);
    expect_matches_oracle(r, pos, tree);
    // classical shape: root has children $ (none here: no empty suffix), a, b..., n; a-node has 'na' child
    EXPECT_EQ(tree.leaf_order(), (std::vector<std::size_t>{5, 3, 1, 0, 4, 2}));
    std::size_t internal = 0;
    for (const auto& nd : tree.nodes()) internal += nd.leaf < 0;
    EXPECT_EQ(internal, 4u); // root, "a", "ana", "na"
}

TEST(SparseTree, LcaLceAllPairs) {
    Text t = gen::as_letters(gen::random(300, 2, 17));
    text_range r(t);
    auto pos = every(t.size(), 1);
    auto tree = build_sparse_tree(r, pos, 1);
    for (std::size_t p = 0; p < t.size(); ++p)
        for (std::size_t q = 0; q < t.size(); ++q) ASSERT_EQ(tree.lce(p, q), oracle::naive_lce(t, p, q));
}

TEST(SparseTree, LceFirstSymbolDiffers) {
    Text t = Text::from_string("abba");
    auto tree = build_sparse_tree(text_range(t), {0, 1, 2, 3}, 1);
    EXPECT_EQ(tree.lce(0, 1), 0u);
    EXPECT_EQ(tree.lce(1, 1), 3u);
}

TEST(SparseTree, Subrange) {
    Text t = gen::as_letters(gen::periodic(500, 3, 7, 1));
    text_range r(t, 100, 260);
    auto pos = every(260, 1, 100);
    auto tree = build_sparse_tree(r, pos, 8);
    expect_matches_oracle(r, pos, tree);
    EXPECT_EQ(tree.lce(100, 107), 153u); // truncated at the range end
}

TEST(SparseTree, RejectsUnsorted) {
    Text t = Text::from_string("abcabc");
    EXPECT_THROW(build_sparse_tree(text_range(t), {3, 1}, 4), std::invalid_argument);
    EXPECT_THROW(build_sparse_tree(text_range(t), {9}, 4), std::invalid_argument);
}
