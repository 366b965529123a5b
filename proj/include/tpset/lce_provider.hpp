#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <vector>

#include "tpset/sparse_tree.hpp"
#include "tpset/suffix_array.hpp"
#include "tpset/text.hpp"

namespace tpset {

struct lce_query_record {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t cap = 0;
    std::size_t result = 0;
};

/// Answers min{cap, lce(i, j)} for the refinement phases.
class lce_provider {
public:
    virtual ~lce_provider() = default;

    std::size_t capped_lce(std::size_t i, std::size_t j, std::size_t cap) {
        std::size_t r = compute(i, j, cap);
        ++queries_;
        if (log_) log_->push_back({i, j, cap, r});
        return r;
    }

    /// Called by the pipeline source before text position `pos` enters phase 1.
    virtual void on_feed(std::size_t /*pos*/) {}

    void set_log(std::vector<lce_query_record>* log) { log_ = log; }
    std::size_t queries() const { return queries_; }
    /// Symbols consumed by (re)building internal structures.
    std::size_t build_symbols() const { return build_symbols_; }

protected:
    virtual std::size_t compute(std::size_t i, std::size_t j, std::size_t cap) = 0;

    std::size_t build_symbols_ = 0;

private:
    std::vector<lce_query_record>* log_ = nullptr;
    std::size_t queries_ = 0;
};

/// Direct symbol comparison.
class naive_provider final : public lce_provider {
public:
    explicit naive_provider(const Text& t) : r_(t) {}

protected:
    std::size_t compute(std::size_t i, std::size_t j, std::size_t cap) override {
        if (i == j) return std::min(cap, r_.hi - i);
        return r_.scan_lce(i, j, cap);
    }

private:
    text_range r_;
};

/// One suffix array + LCP + range-minimum structure over the whole text.
class whole_text_provider final : public lce_provider {
public:
    explicit whole_text_provider(const Text& t) : lce_(t, 0, t.size()) { build_symbols_ = t.size(); }

protected:
    std::size_t compute(std::size_t i, std::size_t j, std::size_t cap) override {
        return std::min(cap, lce_.lce(i, j));
    }

private:
    substring_lce lce_;
};

/// Sliding-window scheme: blocks of length B; while positions of [(i+1)B..(i+2)B)
/// are fed, queries are answered from a structure over s[iB..(i+3)B).
class window_provider final : public lce_provider {
public:
    window_provider(const Text& t, std::size_t block) : t_(t), block_(std::max<std::size_t>(block, 1)) { rebuild(0); }

    void on_feed(std::size_t pos) override {
        while (pos >= (cur_ + 2) * block_) rebuild(cur_ + 1);
    }

    std::size_t block() const { return block_; }
    std::size_t rebuilds() const { return rebuilds_; }

protected:
    std::size_t compute(std::size_t i, std::size_t j, std::size_t cap) override {
        if (i < lce_.lo() || j < lce_.lo() || i >= lce_.hi() || j >= lce_.hi())
            throw invariant_error("LCE query outside the current window");
        std::size_t l = lce_.lce(i, j);
        if (l < cap && l == lce_.hi() - std::max(i, j) && lce_.hi() < t_.size())
            throw invariant_error("LCE query runs past the current window");
        return std::min(cap, l);
    }

private:
    void rebuild(std::size_t i) {
        cur_ = i;
        std::size_t lo = std::min(i * block_, t_.size());
        std::size_t hi = std::min(t_.size(), (i + 3) * block_);
        lce_ = substring_lce(t_, lo, hi);
        build_symbols_ += hi - lo;
        ++rebuilds_;
    }

    const Text& t_;
    std::size_t block_;
    std::size_t cur_ = 0;
    std::size_t rebuilds_ = 0;
    substring_lce lce_;
};

} // namespace tpset
