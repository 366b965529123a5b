#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "tpset/lce_index.hpp"
#include "tpset/sparse_tree.hpp"
#include "tpset/text.hpp"

namespace tpset {

/// Minimal period of s[lo..hi) from its border array.
inline std::size_t minimal_period(const Text& t, std::size_t lo, std::size_t hi) {
    if (hi <= lo) throw std::invalid_argument("empty range");
    std::size_t len = hi - lo;
    std::vector<std::size_t> border(len, 0);
    for (std::size_t i = 1; i < len; ++i) {
        std::size_t k = border[i - 1];
        while (k > 0 && t.at(lo + i) != t.at(lo + k)) k = border[k - 1];
        if (t.at(lo + i) == t.at(lo + k)) ++k;
        border[i] = k;
    }
    return len - border[len - 1];
}

enum class anchor_kind { anchored, periodic, none };

struct suffix_tuple {
    std::size_t pos = 0;
    anchor_kind kind = anchor_kind::anchored;
    std::int64_t r = 0;
    std::int64_t d = 0;
    std::int64_t rt = 0;
    std::int64_t rbar = 0;
    // periodic case only
    std::size_t anchor = npos;
    std::size_t period = 0;
    std::size_t brk = 0;
};

struct user_sst_options {
    /// Check the periodic-case preconditions against the full range (slow).
    bool verify = false;
};

struct user_sst_stats {
    std::size_t anchored = 0;
    std::size_t periodic = 0;
    std::size_t no_anchor = 0;
    std::size_t exact_comparisons = 0;
    std::size_t max_period = 0;
};

/// Tuple (r, d, rt, rbar) of every suffix, in input order.
inline std::vector<suffix_tuple> suffix_tuples(const Text& t, const lce_index& idx, const std::vector<std::size_t>& suffixes,
                                               const user_sst_options& opt = {}, user_sst_stats* stats = nullptr) {
    const std::size_t n = t.size(), tau = idx.tau();
    const auto& tree = idx.tree();
    text_range whole(t);
    std::vector<suffix_tuple> tup(suffixes.size());
    auto r = rank_windows(whole, suffixes, 4 * tau + 1).first;

    std::vector<std::size_t> breaks;
    std::vector<std::size_t> periodic_ids;
    for (std::size_t k = 0; k < suffixes.size(); ++k) {
        suffix_tuple& x = tup[k];
        std::size_t i = suffixes[k];
        x.pos = i;
        x.r = r[k];
        std::size_t jk = idx.successor(i + tau);
        if (jk == npos) {
            x.kind = anchor_kind::none;
            if (stats) ++stats->no_anchor;
            continue;
        }
        x.anchor = jk;
        x.rbar = static_cast<std::int64_t>(tree.rank_of(jk));
        if (jk <= i + 3 * tau) {
            if (stats) ++stats->anchored;
            continue;
        }
        x.kind = anchor_kind::periodic;
        // the range s[i+tau..jk] has a period of at most tau/4, so its first tau+1 symbols already fix it
        std::size_t p = minimal_period(t, i + tau, i + 2 * tau + 1);
        if (opt.verify) {
            std::size_t full = minimal_period(t, i + tau, jk + 1);
            if (full != p || 4 * full > tau) throw invariant_error("long S*-free range without a short period");
        }
        std::size_t b = jk + 1;
        while (t.at(b) == t.at(b - p)) ++b;
        if (b > jk + tau) throw invariant_error("period break beyond anchor + tau");
        x.period = p;
        x.brk = b;
        auto e = static_cast<std::int64_t>(b - i), nn = static_cast<std::int64_t>(n);
        x.d = t.at(b) < t.at(b - p) ? e - nn : -(e - nn);
        breaks.push_back(b);
        periodic_ids.push_back(k);
        if (stats) {
            ++stats->periodic;
            stats->max_period = std::max(stats->max_period, p);
        }
    }
    auto rt = rank_windows(whole, breaks, tau + 1).first;
    for (std::size_t h = 0; h < periodic_ids.size(); ++h) tup[periodic_ids[h]].rt = rt[h];
    return tup;
}

/// Sparse suffix tree over arbitrary distinct suffixes, sorted through their tuples.
inline sparse_tree build_user_sst(const Text& t, const lce_index& idx, std::vector<std::size_t> suffixes,
                                  const user_sst_options& opt = {}, user_sst_stats* stats = nullptr) {
    user_sst_stats local;
    user_sst_stats& st = stats ? *stats : local;
    st = {};
    const std::size_t n = t.size();
    if (idx.size() != n) throw std::invalid_argument("index was built for another text");
    {
        auto sorted = suffixes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("duplicate suffix position");
        if (!sorted.empty() && sorted.back() >= n) throw std::invalid_argument("suffix position outside the text");
    }
    auto tup = suffix_tuples(t, idx, suffixes, opt, &st);

    auto exact_less = [&](std::size_t a, std::size_t b) {
        ++st.exact_comparisons;
        std::size_t l = idx.query(a, b);
        return t.at(a + l) < t.at(b + l);
    };
    std::vector<std::size_t> order(tup.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const suffix_tuple& a = tup[x];
        const suffix_tuple& b = tup[y];
        if (a.r != b.r) return a.r < b.r;
        // no anchor at or after i + tau: compare directly
        if (a.kind == anchor_kind::none || b.kind == anchor_kind::none) return exact_less(a.pos, b.pos);
        return std::tie(a.d, a.rt, a.rbar) < std::tie(b.d, b.rt, b.rbar);
    });

    std::vector<std::size_t> sorted(order.size()), lcp(order.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted[k] = tup[order[k]].pos;
        if (k > 0) lcp[k] = idx.query(sorted[k - 1], sorted[k]);
    }
    if (opt.verify) {
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            std::size_t l = lcp[k];
            if (!(t.at(sorted[k - 1] + l) < t.at(sorted[k] + l))) throw invariant_error("tuple order disagrees with the text");
        }
    }
    return sparse_tree::from_sorted(0, n, sorted, lcp);
}

} // namespace tpset
