#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpset/rmq.hpp"
#include "tpset/suffix_array.hpp"
#include "tpset/text.hpp"

namespace tpset {

/// Substring [lo, hi) of a text; reads at or past hi give the sentinel.
struct text_range {
    const Text* text = nullptr;
    std::size_t lo = 0;
    std::size_t hi = 0;

    text_range() = default;
    explicit text_range(const Text& t) : text(&t), lo(0), hi(t.size()) {}
    text_range(const Text& t, std::size_t l, std::size_t h) : text(&t), lo(l), hi(std::min(h, t.size())) {}

    std::int64_t at(std::size_t i) const { return i < hi ? text->at(i) : -1; }

    /// Number of equal symbols from i and j, stopping after `cap`.
    std::size_t scan_lce(std::size_t i, std::size_t j, std::size_t cap) const {
        std::size_t l = 0;
        while (l < cap && at(i + l) == at(j + l) && at(i + l) != -1) ++l;
        return l;
    }
};

enum class sort_method { multikey, radix };

namespace detail {

inline void multikey_sort(const text_range& r, std::size_t len, std::size_t* a, std::size_t n, std::size_t depth) {
    while (n > 1 && depth < len) {
        std::int64_t pivot = r.at(a[n / 2] + depth);
        std::size_t lt = 0, i = 0, gt = n;
        while (i < gt) {
            std::int64_t k = r.at(a[i] + depth);
            if (k < pivot) std::swap(a[lt++], a[i++]);
            else if (k > pivot) std::swap(a[i], a[--gt]);
            else ++i;
        }
        multikey_sort(r, len, a, lt, depth);
        multikey_sort(r, len, a + gt, n - gt, depth);
        a += lt;
        n = gt - lt;
        ++depth;
    }
}

inline void radix_sort(const text_range& r, std::size_t len, std::vector<std::size_t>& a) {
    std::uint64_t maxkey = r.text->sigma_bound();
    unsigned bytes = 1;
    while (bytes < 8 && (maxkey >> (8 * bytes)) != 0) ++bytes;
    std::vector<std::size_t> tmp(a.size());
    for (std::size_t d = len; d-- > 0;) {
        for (unsigned byte = 0; byte < bytes; ++byte) {
            std::size_t count[257] = {};
            auto digit = [&](std::size_t p) {
                std::uint64_t key = static_cast<std::uint64_t>(r.at(p + d) + 1);
                return static_cast<std::size_t>((key >> (8 * byte)) & 0xff);
            };
            for (auto p : a) ++count[digit(p) + 1];
            for (int c = 0; c < 256; ++c) count[c + 1] += count[c];
            for (auto p : a) tmp[count[digit(p)]++] = p;
            a.swap(tmp);
        }
    }
}

} // namespace detail

/// Sorts the length-`len` windows starting at `starts` and returns dense ranks
/// (equal windows share a rank) in input order, plus the number of distinct ranks.
inline std::pair<std::vector<std::int32_t>, std::int32_t>
rank_windows(const text_range& r, const std::vector<std::size_t>& starts, std::size_t len,
             sort_method how = sort_method::multikey) {
    std::vector<std::size_t> order(starts);
    if (how == sort_method::multikey) detail::multikey_sort(r, len, order.data(), order.size(), 0);
    else detail::radix_sort(r, len, order);
    std::vector<std::pair<std::size_t, std::int32_t>> by_pos(order.size());
    std::int32_t next = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) {
            bool differ = false;
            for (std::size_t d = 0; d < len && !differ; ++d) differ = r.at(order[i - 1] + d) != r.at(order[i] + d);
            if (differ) ++next;
        }
        by_pos[i] = {order[i], next};
    }
    std::sort(by_pos.begin(), by_pos.end());
    std::vector<std::int32_t> ranks(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i)
        ranks[i] = std::lower_bound(by_pos.begin(), by_pos.end(), std::make_pair(starts[i], std::int32_t{-1}))->second;
    return {ranks, order.empty() ? 0 : next + 1};
}

/// Compacted trie over a set of suffixes of a text range. Leaves carry the
/// sentinel, so a leaf for position p has string depth hi - p + 1.
class sparse_tree {
public:
    struct node {
        std::int64_t parent = -1;
        std::size_t depth = 0;
        std::size_t edge_start = 0;
        std::size_t edge_len = 0;
        std::int64_t leaf = -1;
        std::vector<std::uint32_t> children;
    };

    sparse_tree() { nodes_.emplace_back(); }

    /// Builds the tree from suffixes in lexicographic order and the LCE of each adjacent pair
    /// (lcp[i] belongs to sorted[i-1], sorted[i]; lcp[0] is ignored).
    static sparse_tree from_sorted(std::size_t lo, std::size_t hi, const std::vector<std::size_t>& sorted,
                                   const std::vector<std::size_t>& lcp) {
        sparse_tree t;
        t.lo_ = lo;
        t.hi_ = hi;
        std::vector<node>& nd = t.nodes_;
        std::vector<std::uint32_t> stack{0};
        for (std::size_t k = 0; k < sorted.size(); ++k) {
            std::size_t p = sorted[k];
            std::size_t leaf_depth = hi - p + 1;
            if (k > 0) {
                std::size_t l = lcp[k];
                if (l >= leaf_depth || l >= hi - sorted[k - 1] + 1)
                    throw invariant_error("adjacent LCE exceeds a suffix length");
                std::uint32_t last = 0;
                bool popped = false;
                while (nd[stack.back()].depth > l) {
                    last = stack.back();
                    stack.pop_back();
                    popped = true;
                }
                if (popped && nd[stack.back()].depth < l) {
                    auto u = static_cast<std::uint32_t>(nd.size());
                    node in;
                    in.parent = stack.back();
                    in.depth = l;
                    in.children.push_back(last);
                    nd.push_back(std::move(in));
                    nd[stack.back()].children.back() = u;
                    nd[last].parent = u;
                    stack.push_back(u);
                }
            }
            auto v = static_cast<std::uint32_t>(nd.size());
            node lf;
            lf.parent = stack.back();
            lf.depth = leaf_depth;
            lf.leaf = static_cast<std::int64_t>(p);
            nd.push_back(std::move(lf));
            nd[stack.back()].children.push_back(v);
            stack.push_back(v);
        }
        t.finalize();
        return t;
    }

    const std::vector<node>& nodes() const { return nodes_; }
    std::size_t lo() const { return lo_; }
    std::size_t hi() const { return hi_; }

    /// Suffix positions in lexicographic order.
    const std::vector<std::size_t>& leaf_order() const { return order_; }
    std::size_t leaf_count() const { return order_.size(); }

    /// Node id of the leaf for position p, or npos.
    std::size_t leaf_of(std::size_t p) const {
        auto it = std::lower_bound(leaf_index_.begin(), leaf_index_.end(), std::make_pair(p, std::uint32_t{0}));
        if (it == leaf_index_.end() || it->first != p) return npos;
        return it->second;
    }

    /// Lexicographic rank of the suffix at p among the indexed ones.
    std::size_t rank_of(std::size_t p) const {
        auto it = std::lower_bound(rank_index_.begin(), rank_index_.end(), std::make_pair(p, std::size_t{0}));
        if (it == rank_index_.end() || it->first != p) throw std::invalid_argument("position is not indexed");
        return it->second;
    }

    std::size_t lca(std::size_t u, std::size_t v) const {
        std::size_t a = first_[u], b = first_[v];
        if (a > b) std::swap(a, b);
        return euler_[euler_rmq_.argmin(a, b)];
    }

    /// LCE of two indexed suffixes (truncated at hi).
    std::size_t lce(std::size_t p, std::size_t q) const {
        if (p == q) return hi_ - p;
        std::size_t u = leaf_of(p), v = leaf_of(q);
        if (u == npos || v == npos) throw std::invalid_argument("lca_lce on a position that is not indexed");
        return nodes_[lca(u, v)].depth;
    }

    /// One line per node in pre-order: `node <id> parent <pid> edge <start> <len>[ leaf <pos>]`.
    std::string serialize() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const node& x = nodes_[i];
            os << "node " << i << " parent " << x.parent << " edge " << x.edge_start << ' ' << x.edge_len;
            if (x.leaf >= 0) os << " leaf " << x.leaf;
            os << '\n';
        }
        return os.str();
    }

private:
    void finalize() {
        // renumber in pre-order
        std::vector<std::uint32_t> order;
        order.reserve(nodes_.size());
        std::vector<std::uint32_t> st{0};
        while (!st.empty()) {
            auto x = st.back();
            st.pop_back();
            order.push_back(x);
            const auto& ch = nodes_[x].children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) st.push_back(*it);
        }
        std::vector<std::uint32_t> newid(nodes_.size());
        for (std::size_t i = 0; i < order.size(); ++i) newid[order[i]] = static_cast<std::uint32_t>(i);
        std::vector<node> nn(nodes_.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            node x = std::move(nodes_[order[i]]);
            if (x.parent >= 0) x.parent = newid[x.parent];
            for (auto& c : x.children) c = newid[c];
            nn[i] = std::move(x);
        }
        nodes_ = std::move(nn);

        // representative leaf per node (first in subtree), edge labels
        std::vector<std::size_t> rep(nodes_.size(), 0);
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            if (nodes_[i].leaf >= 0) rep[i] = static_cast<std::size_t>(nodes_[i].leaf);
            else if (!nodes_[i].children.empty()) rep[i] = rep[nodes_[i].children.front()];
        }
        order_.clear();
        leaf_index_.clear();
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            node& x = nodes_[i];
            std::size_t pd = nodes_[x.parent].depth;
            x.edge_start = rep[i] + pd;
            x.edge_len = x.depth - pd;
            if (x.leaf >= 0) {
                order_.push_back(static_cast<std::size_t>(x.leaf));
                leaf_index_.emplace_back(static_cast<std::size_t>(x.leaf), static_cast<std::uint32_t>(i));
            }
        }
        std::sort(leaf_index_.begin(), leaf_index_.end());
        rank_index_.resize(order_.size());
        for (std::size_t r = 0; r < order_.size(); ++r) rank_index_[r] = {order_[r], r};
        std::sort(rank_index_.begin(), rank_index_.end());

        // Euler tour for LCA
        euler_.clear();
        first_.assign(nodes_.size(), 0);
        std::vector<std::uint32_t> tdepth;
        std::vector<std::pair<std::uint32_t, std::size_t>> es{{0, 0}};
        std::vector<std::uint32_t> td(nodes_.size(), 0);
        while (!es.empty()) {
            auto& [x, ci] = es.back();
            if (ci == 0) first_[x] = euler_.size();
            euler_.push_back(x);
            tdepth.push_back(td[x]);
            if (ci < nodes_[x].children.size()) {
                std::uint32_t c = nodes_[x].children[ci++];
                td[c] = td[x] + 1;
                es.emplace_back(c, 0);
            } else {
                es.pop_back();
            }
        }
        euler_rmq_ = range_min(std::move(tdepth));
    }

    std::vector<node> nodes_;
    std::size_t lo_ = 0, hi_ = 0;
    std::vector<std::size_t> order_;
    std::vector<std::pair<std::size_t, std::uint32_t>> leaf_index_;
    std::vector<std::pair<std::size_t, std::size_t>> rank_index_;
    std::vector<std::uint32_t> euler_;
    std::vector<std::size_t> first_;
    range_min euler_rmq_;
};

struct sparse_tree_options {
    sort_method sorting = sort_method::multikey;
    /// Re-check every adjacent LCE by a full scan (small inputs only).
    bool verify = false;
};

struct sparse_tree_stats {
    std::size_t covers = 0;
    std::size_t symbols_scanned = 0;
};

/// Sparse suffix tree over `positions` (sorted, inside [r.lo, r.hi)), which must
/// satisfy local consistency and forward synchronization for `tau` within the range.
inline sparse_tree build_sparse_tree(const text_range& r, const std::vector<std::size_t>& positions, std::size_t tau,
                                     const sparse_tree_options& opt = {}, sparse_tree_stats* stats = nullptr) {
    if (tau == 0) throw std::invalid_argument("tau must be positive");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < r.lo || positions[i] >= r.hi) throw std::invalid_argument("position outside the range");
        if (i > 0 && positions[i] <= positions[i - 1]) throw std::invalid_argument("positions must be strictly increasing");
    }
    if (positions.empty()) return sparse_tree::from_sorted(r.lo, r.hi, {}, {});

    // covering windows s[c..c+2tau]
    std::vector<std::size_t> cover;
    std::vector<std::int32_t> cover_of_leaf;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        std::size_t next = k + 1 < positions.size() ? positions[k + 1] : r.hi;
        cover_of_leaf.push_back(static_cast<std::int32_t>(cover.size()));
        for (std::size_t c = positions[k]; c < next; c += tau) cover.push_back(c);
    }
    std::size_t wlen = 2 * tau + 1;
    auto [ranks, distinct] = rank_windows(r, cover, wlen, opt.sorting);
    if (stats) {
        stats->covers += cover.size();
        stats->symbols_scanned += cover.size() * wlen;
    }

    auto sa = suffix_array(ranks, std::max<std::int32_t>(distinct - 1, 0));
    auto lcp = lcp_array(ranks, sa);
    std::vector<std::int32_t> rpos(sa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) rpos[sa[i]] = static_cast<std::int32_t>(i);
    range_min lcp_rmq(lcp);

    std::vector<char> is_leaf(cover.size(), 0);
    for (auto c : cover_of_leaf) is_leaf[c] = 1;

    std::vector<std::size_t> sorted, text_lcp;
    std::int32_t prev = -1;
    for (auto h : sa) {
        if (!is_leaf[h]) continue;
        std::size_t tl = 0;
        if (prev >= 0) {
            std::size_t a = static_cast<std::size_t>(rpos[prev]), b = static_cast<std::size_t>(rpos[h]);
            std::size_t l = lcp_rmq.min(a + 1, b);
            std::size_t hp = static_cast<std::size_t>(prev) + l, hh = static_cast<std::size_t>(h) + l;
            if (hp >= cover.size() || hh >= cover.size())
                throw invariant_error("rank string suffix exhausted while ranks agree");
            std::size_t off = cover[hp] - cover[prev];
            if (off != cover[hh] - cover[h])
                throw invariant_error("covering windows are not aligned; the position set is not synchronized");
            std::size_t m = r.scan_lce(cover[hp], cover[hh], wlen);
            if (m >= wlen) throw invariant_error("distinct window ranks with equal windows");
            tl = off + m;
            if (stats) stats->symbols_scanned += m + 1;
            if (opt.verify) {
                std::size_t naive = r.scan_lce(cover[prev], cover[h], r.hi);
                if (naive != tl) throw invariant_error("sparse tree adjacent LCE disagrees with a full scan");
            }
        }
        sorted.push_back(cover[h]);
        text_lcp.push_back(tl);
        prev = h;
    }
    return sparse_tree::from_sorted(r.lo, r.hi, sorted, text_lcp);
}

} // namespace tpset
