#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tpset/sparse_tree.hpp"
#include "tpset/text.hpp"

namespace tpset {

struct lce_query_stats {
    std::size_t symbol_reads = 0; // compared symbol pairs
    std::size_t walk_steps = 0;   // S* entries visited by successor walks
    unsigned depth = 0;           // periodicity jumps taken
    bool fallback = false;        // no successor; answered by a plain scan
    bool jumped = false;
    std::size_t jump = 0;
};

/// LCE index over a tau-partitioning set: sparse tree over the set's suffixes plus
/// N[i] = min{j >= i*tau : j in S*}.
class lce_index {
public:
    lce_index() = default;

    lce_index(const Text& t, std::vector<std::size_t> sstar, std::size_t tau, const sparse_tree_options& opt = {})
        : text_(&t), sstar_(std::move(sstar)), tau_(tau), n_(t.size()) {
        if (tau_ == 0) throw std::invalid_argument("tau must be positive");
        for (std::size_t i = 1; i < sstar_.size(); ++i)
            if (sstar_[i] <= sstar_[i - 1]) throw std::invalid_argument("S* must be strictly increasing");
        if (!sstar_.empty() && sstar_.back() >= n_) throw std::invalid_argument("S* position past the text");
        tree_ = build_sparse_tree(text_range(t), sstar_, tau_, opt);
        std::size_t blocks = (n_ + tau_ - 1) / tau_;
        nidx_.resize(blocks);
        std::size_t k = 0;
        for (std::size_t i = 0; i < blocks; ++i) {
            while (k < sstar_.size() && sstar_[k] < i * tau_) ++k;
            nidx_[i] = k;
        }
    }

    std::size_t size() const { return n_; }
    std::size_t tau() const { return tau_; }
    const std::vector<std::size_t>& sstar() const { return sstar_; }
    const sparse_tree& tree() const { return tree_; }

    /// N as positions; npos marks "no element".
    std::vector<std::size_t> N() const {
        std::vector<std::size_t> out(nidx_.size());
        for (std::size_t i = 0; i < nidx_.size(); ++i) out[i] = nidx_[i] < sstar_.size() ? sstar_[nidx_[i]] : npos;
        return out;
    }

    /// min{j >= x : j in S*}, or npos.
    std::size_t successor(std::size_t x, lce_query_stats* st = nullptr) const {
        if (x >= n_) return npos;
        std::size_t k = nidx_[x / tau_];
        // x - floor(x/tau)*tau < tau, so the walk never passes more than tau text positions
        while (k < sstar_.size() && sstar_[k] < x) {
            ++k;
            if (st) ++st->walk_steps;
        }
        return k < sstar_.size() ? sstar_[k] : npos;
    }

    std::size_t query(std::size_t p, std::size_t q, lce_query_stats* st = nullptr) const {
        lce_query_stats local;
        lce_query_stats& s = st ? *st : local;
        s = {};
        if (p >= n_ || q >= n_) throw std::out_of_range("lce query position outside the text");
        if (p == q) return n_ - p;
        return answer(p, q, s);
    }

private:
    std::size_t scan(std::size_t p, std::size_t q, std::size_t cap, lce_query_stats& s) const {
        std::size_t l = 0;
        while (l < cap && text_->at(p + l) == text_->at(q + l) && text_->at(p + l) != -1) ++l;
        s.symbol_reads += l < cap ? l + 1 : l;
        return l;
    }

    std::size_t answer(std::size_t p, std::size_t q, lce_query_stats& s) const {
        std::size_t p2 = successor(p + tau_, &s), q2 = successor(q + tau_, &s);
        if (p2 == npos || q2 == npos) {
            s.fallback = true;
            return scan(p, q, n_ - std::max(p, q), s);
        }
        std::size_t gp = p2 - p, gq = q2 - q;
        if (gp <= 2 * tau_ || gq <= 2 * tau_) {
            std::size_t cap = 3 * tau_ + 1;
            std::size_t l = scan(p, q, cap, s);
            if (l < cap) return l;
            if (gp != gq) throw invariant_error("equal 3tau+1 contexts with different successor offsets");
            return gp + tree_.lce(p2, q2);
        }
        std::size_t cap = 2 * tau_ + 1;
        std::size_t l = scan(p, q, cap, s);
        if (l < cap) return l;
        if (s.depth > 0) throw invariant_error("second periodicity jump");
        std::size_t jump = std::min(gp, gq) - tau_;
        ++s.depth;
        s.jumped = true;
        s.jump = jump;
        return jump + answer(p + jump, q + jump, s);
    }

    const Text* text_ = nullptr;
    std::vector<std::size_t> sstar_;
    std::vector<std::size_t> nidx_;
    std::size_t tau_ = 1;
    std::size_t n_ = 0;
    sparse_tree tree_;
};

} // namespace tpset
