#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tpset/bitops.hpp"
#include "tpset/refine.hpp"
#include "tpset/sparse_tree.hpp"
#include "tpset/text.hpp"

namespace tpset {

/// Field widths and sizes of the letters a_p.
struct letter_shape {
    std::size_t tau = 0;
    std::size_t ell = 0;    // tuple length
    std::size_t reach = 0;  // neighbours are S' ∩ (q..q+reach]
    std::size_t window = 0; // compared windows s[q..q+tau/2]
    std::array<unsigned, 4> field{};
};

inline letter_shape make_letter_shape(const ParamEnv& p) {
    letter_shape s;
    s.tau = p.tau;
    s.ell = std::size_t{64} * p.lambda3;
    s.reach = p.tau >> 5;
    s.window = p.tau / 2 + 1;
    // level 1 values stay below 2 * (bits of a window); level L below 2 * (bits of a level L-1 chunk)
    s.field[0] = field_width_for(2 * std::uint64_t{s.window} * p.code_width);
    for (int l = 1; l < 4; ++l) s.field[l] = field_width_for(2 * std::uint64_t{s.ell} * s.field[l - 1]);
    return s;
}

/// Letters of S' in order plus the distance counters M_i[j] = |S' ∩ (p..p+tau/2^j]|.
struct r_sequence {
    std::vector<Chunk> letters;
    std::vector<std::uint32_t> ids;    // rank of the letter among the distinct letters (numeric order)
    std::vector<std::uint32_t> m;      // |R| rows of `mwidth` counters
    std::size_t mwidth = 0;
    std::vector<std::size_t> origin;   // S' position of each letter (desk mode)
    std::vector<std::uint32_t> source; // index in the initial R

    std::size_t size() const { return source.size(); }
    std::uint32_t M(std::size_t i, std::size_t j) const { return m[i * mwidth + j]; }

    /// Assigns ids by sorting the distinct letters.
    void assign_ids() {
        std::vector<std::uint32_t> order(letters.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return letters[a] < letters[b]; });
        ids.assign(letters.size(), 0);
        std::uint32_t next = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k > 0 && !(letters[order[k - 1]] == letters[order[k]])) ++next;
            ids[order[k]] = next;
        }
    }
};

struct front_stats {
    std::size_t inputs = 0;  // |S|
    std::size_t outputs = 0; // |S'|
    std::size_t trees = 0;
    std::size_t max_tree_leaves = 0;
    std::size_t max_queue = 0;
    std::size_t comparisons = 0;
    std::size_t max_neighbours = 0;
};

/// Stage 1 (S -> S') and, optionally, stage 2 (letters and M arrays) over one left-to-right pass.
/// Window i holds a sparse tree over S ∩ [i*tau, (i+3)*tau) and decides the positions of
/// [(i+1/2)*tau, (i+3/2)*tau); letters of those positions are built after window i+1.
class front_end final : public position_sink {
public:
    front_end(const Text& t, const ParamEnv& p, position_sink& out, r_sequence* letters = nullptr)
        : t_(t), tau_(p.tau), half_(p.tau / 2), quarter_(p.tau / 4), out_(out), r_(letters) {
        if (tau_ < 4) throw std::invalid_argument("tau must be at least 4");
        if (r_) {
            shape_ = make_letter_shape(p);
            r_->mwidth = std::max<std::size_t>(p.lambda4, 5) + 1;
            keep_origin_ = p.run_mode == mode::desk;
        }
    }

    const front_stats& stats() const { return st_; }

    void push(std::size_t x) override {
        if (!s_.empty() && x <= s_.back().pos) throw std::invalid_argument("positions must arrive in increasing order");
        s_.push_back({x, false});
        ++st_.inputs;
        bound_ = std::max(bound_, x + 1);
        pump();
    }

    void advance(std::size_t bound) override {
        bound_ = std::max(bound_, bound);
        pump();
    }

    void finish() override {
        finished_ = true;
        pump();
        if (r_ && cur_) letters_for(*cur_, cur_i_);
        out_.finish();
    }

private:
    struct item {
        std::size_t pos;
        bool marked;
    };
    struct live_tree {
        sparse_tree tree;
        std::size_t lo = 0, hi = 0;
    };

    std::size_t decide_lo(std::size_t i) const { return i == 0 ? 0 : i * tau_ + half_; }
    std::size_t decide_hi(std::size_t i) const { return (i + 1) * tau_ + half_; }

    std::size_t capped(const live_tree& lt, std::size_t a, std::size_t b, std::size_t cap) const {
        if (a < lt.lo || b < lt.lo || a >= lt.hi || b >= lt.hi) throw invariant_error("comparison outside the window");
        std::size_t l = lt.tree.lce(a, b);
        if (l < cap && l == lt.hi - std::max(a, b) && lt.hi < t_.size())
            throw invariant_error("comparison runs past the window");
        return std::min(l, cap);
    }

    void pump() {
        const std::size_t n = t_.size();
        while (!done_) {
            std::size_t i = next_i_;
            std::size_t lo = i * tau_, hi = std::min(n, (i + 3) * tau_);
            if (!(finished_ || bound_ >= hi)) return;
            std::vector<std::size_t> q;
            for (const auto& e : s_)
                if (e.pos >= lo && e.pos < hi) q.push_back(e.pos);
            auto lt = std::make_unique<live_tree>();
            lt->tree = build_sparse_tree(text_range(t_, lo, hi), q, std::max<std::size_t>(half_, 1));
            lt->lo = lo;
            lt->hi = hi;
            ++st_.trees;
            st_.max_tree_leaves = std::max(st_.max_tree_leaves, q.size());

            // stage 1 decisions for x in [decide_lo, decide_hi)
            std::size_t dlo = decide_lo(i), dhi = decide_hi(i);
            for (std::size_t a = 0; a < s_.size() && s_[a].pos < dhi; ++a) {
                std::size_t x = s_[a].pos;
                if (x < dlo) continue;
                std::size_t qn = 0;
                for (std::size_t b = a + 1; b < s_.size() && s_[b].pos <= x + quarter_; ++b) {
                    ++qn;
                    ++st_.comparisons;
                    if (capped(*lt, x, s_[b].pos, half_ + 1) < half_ + 1) continue;
                    for (std::size_t c = b; c > a && !s_[c].marked; --c) s_[c].marked = true;
                }
                st_.max_queue = std::max(st_.max_queue, qn);
            }
            // every position below dhi is final
            while (!s_.empty() && s_.front().pos < dhi) {
                item e = s_.front();
                s_.pop_front();
                if (e.marked) continue;
                ++st_.outputs;
                out_.push(e.pos);
                if (r_) sp_.push_back(e.pos);
            }
            out_.advance(std::min(dhi, n));
            sp_final_ = std::min(dhi, n);

            if (r_ && cur_) letters_for(*cur_, cur_i_);
            cur_ = std::move(lt);
            cur_i_ = i;
            ++next_i_;
            if (dhi >= n) done_ = true;
        }
    }

    // ---- stage 2 ----

    std::size_t sp_index(std::size_t pos) const {
        return sp_base_ + static_cast<std::size_t>(std::lower_bound(sp_.begin(), sp_.end(), pos) - sp_.begin());
    }
    std::size_t sp_at(std::size_t idx) const { return sp_[idx - sp_base_]; }
    std::size_t sp_end() const { return sp_base_ + sp_.size(); }

    const Chunk& chunk(const live_tree& lt, std::size_t idx, int level) {
        auto& slot = memo_[idx - sp_base_][level];
        if (slot) return *slot;
        const std::size_t q = sp_at(idx);
        const std::size_t wl = shape_.window;
        if (q + shape_.reach >= sp_final_ && sp_final_ < t_.size())
            throw invariant_error("letter context is not final");
        std::vector<vvalue> w(shape_.ell, infinity);
        std::size_t m = 0;
        for (std::size_t x = idx + 1; x < sp_end() && sp_at(x) <= q + shape_.reach; ++x, ++m) {
            if (m >= shape_.ell) throw invariant_error("more neighbours than tuple entries");
            if (level == 0) {
                std::size_t l = capped(lt, q, sp_at(x), wl);
                if (l >= wl) throw invariant_error("equal windows among close S' positions");
                w[m] = vprime_from_lce(t_, q, sp_at(x), l);
            } else {
                const Chunk& a = chunk(lt, idx, level - 1);
                const Chunk& b = chunk(lt, x, level - 1);
                w[m] = vbit(a, b);
            }
        }
        st_.max_neighbours = std::max(st_.max_neighbours, m);
        slot = encode_tuple(w, shape_.field[level]);
        return *slot;
    }

    void letters_for(const live_tree& lt, std::size_t i) {
        std::size_t dhi = std::min(decide_hi(i), t_.size());
        memo_.resize(sp_.size());
        while (next_letter_ < sp_end() && sp_at(next_letter_) < dhi) {
            std::size_t idx = next_letter_++;
            std::size_t p = sp_at(idx);
            r_->letters.push_back(chunk(lt, idx, 3));
            r_->source.push_back(static_cast<std::uint32_t>(r_->source.size()));
            if (keep_origin_) r_->origin.push_back(p);
            for (std::size_t j = 0; j < r_->mwidth; ++j) {
                std::size_t lim = p + (tau_ >> j);
                std::size_t c = sp_index(lim + 1) - idx - 1;
                if (lim >= sp_final_ && sp_final_ < t_.size()) throw invariant_error("M array context is not final");
                r_->m.push_back(static_cast<std::uint32_t>(c));
            }
            // positions left of p are never needed again
            while (sp_base_ < idx) {
                sp_.pop_front();
                memo_.pop_front();
                ++sp_base_;
            }
        }
    }

    const Text& t_;
    std::size_t tau_, half_, quarter_;
    position_sink& out_;
    r_sequence* r_;
    letter_shape shape_;
    bool keep_origin_ = false;

    std::deque<item> s_;
    std::size_t bound_ = 0;
    bool finished_ = false, done_ = false;
    std::size_t next_i_ = 0;
    std::unique_ptr<live_tree> cur_;
    std::size_t cur_i_ = 0;

    std::deque<std::size_t> sp_;
    std::deque<std::array<std::optional<Chunk>, 4>> memo_;
    std::size_t sp_base_ = 0, sp_final_ = 0, next_letter_ = 0;
    front_stats st_;
};

// ---- recompression ----

using pair_weights = std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>;

struct cut_partition {
    std::vector<std::uint32_t> acute;
    std::vector<std::uint32_t> grave;
    std::uint64_t forward = 0;  // acute -> grave weight
    std::uint64_t backward = 0; // grave -> acute weight
    std::uint64_t total = 0;

    bool in_acute(std::uint32_t a) const { return std::binary_search(acute.begin(), acute.end(), a); }
    bool in_grave(std::uint32_t a) const { return std::binary_search(grave.begin(), grave.end(), a); }
};

/// Greedy directed cut: letters in ascending order, each joins the side adding more undirected
/// cut weight (acute on ties); the sides are swapped if that makes acute -> grave heavier.
inline cut_partition greedy_cut(const pair_weights& P) {
    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj;
    for (const auto& [ab, w] : P) {
        adj[ab.first].emplace_back(ab.second, w);
        adj[ab.second].emplace_back(ab.first, w);
    }
    std::map<std::uint32_t, bool> side; // true: acute
    for (const auto& [a, edges] : adj) {
        std::uint64_t c0 = 0, c1 = 0;
        for (auto [b, w] : edges) {
            auto it = side.find(b);
            if (it == side.end() || b == a) continue;
            (it->second ? c1 : c0) += w;
        }
        side[a] = c0 >= c1;
    }
    cut_partition c;
    for (const auto& [ab, w] : P) {
        c.total += w;
        bool sa = side[ab.first], sb = side[ab.second];
        if (sa && !sb) c.forward += w;
        if (!sa && sb) c.backward += w;
    }
    bool swap = c.forward < c.backward;
    for (const auto& [a, s] : side) (s != swap ? c.acute : c.grave).push_back(a);
    if (swap) std::swap(c.forward, c.backward);
    return c;
}

struct recompress_step_stats {
    unsigned j = 0;
    std::size_t length_before = 0;
    std::size_t eligible_before = 0;
    std::size_t eligible_after = 0;
    std::size_t removed = 0;
    std::uint64_t cut_forward = 0;
    std::uint64_t cut_total = 0;
};

/// Number of i with M_i[j] != 0 and M_{i-1}[5] != 0.
inline std::size_t eligible_pairs(const r_sequence& R, unsigned j) {
    std::size_t d = 0;
    for (std::size_t i = 1; i < R.size(); ++i)
        if (R.M(i, j) != 0 && R.M(i - 1, 5) != 0) ++d;
    return d;
}

inline recompress_step_stats recompress_step(r_sequence& R, unsigned j) {
    if (j >= R.mwidth) throw std::invalid_argument("distance exponent outside the M arrays");
    recompress_step_stats st;
    st.j = j;
    st.length_before = R.size();
    const std::size_t len = R.size();
    auto eligible = [&](std::size_t i) { return i >= 1 && i + 1 < len && R.M(i, j) != 0 && R.M(i - 1, 5) != 0; };

    pair_weights P;
    for (std::size_t i = 1; i + 1 < len; ++i)
        if (eligible(i)) {
            auto a = R.ids[R.source[i]], b = R.ids[R.source[i + 1]];
            if (a == b) throw invariant_error("equal adjacent letters at a close pair");
            ++P[{a, b}];
            ++st.eligible_before;
        }
    if (st.eligible_before == 0) return st;
    cut_partition cut = greedy_cut(P);
    st.cut_forward = cut.forward;
    st.cut_total = cut.total;

    std::vector<char> gone(len, 0);
    for (std::size_t i = 1; i + 1 < len; ++i)
        if (eligible(i) && cut.in_acute(R.ids[R.source[i]]) && cut.in_grave(R.ids[R.source[i + 1]])) gone[i] = 1;

    // survivors among i+1..i+M_i[j'] via prefix sums
    std::vector<std::uint32_t> alive(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) alive[i + 1] = alive[i] + (gone[i] ? 0 : 1);
    r_sequence out;
    out.mwidth = R.mwidth;
    out.letters = std::move(R.letters);
    out.ids = std::move(R.ids);
    for (std::size_t i = 0; i < len; ++i) {
        if (gone[i]) {
            ++st.removed;
            continue;
        }
        out.source.push_back(R.source[i]);
        if (!R.origin.empty()) out.origin.push_back(R.origin[i]);
        for (std::size_t jj = 0; jj < R.mwidth; ++jj) {
            std::size_t c = R.M(i, jj);
            out.m.push_back(alive[i + 1 + c] - alive[i + 1]);
        }
    }
    R = std::move(out);
    st.eligible_after = eligible_pairs(R, j);
    return st;
}

struct recompress_options {
    /// Steps to run for every j even when the length target already holds (at most 3).
    unsigned force_steps = 0;
};

struct recompress_stats {
    std::size_t initial_length = 0;
    std::size_t final_length = 0;
    std::vector<std::pair<unsigned, unsigned>> iterations; // (j, steps run)
    std::vector<recompress_step_stats> steps;
};

inline std::pair<unsigned, unsigned> recompress_range(const ParamEnv& p) {
    unsigned hi = p.run_mode == mode::desk ? std::max(p.lambda4, 6u) : p.lambda4;
    return {6, hi};
}

/// Runs the recompression and returns the keep-mask over the initial R.
inline std::vector<char> recompress_loop(r_sequence& R, const ParamEnv& p, const recompress_options& opt = {},
                                         recompress_stats* stats = nullptr) {
    recompress_stats local;
    recompress_stats& st = stats ? *stats : local;
    st = {};
    const std::size_t initial = R.size();
    st.initial_length = initial;
    auto [lo, hi] = recompress_range(p);
    unsigned forced = std::min(opt.force_steps, 3u);
    for (unsigned j = hi; j >= lo && j >= 6; --j) {
        auto too_long = [&] {
            return static_cast<unsigned __int128>(R.size()) * p.tau >
                   (static_cast<unsigned __int128>(1) << (j + 10)) * p.n;
        };
        unsigned it = 0;
        while (it < 3 && (too_long() || it < forced)) {
            st.steps.push_back(recompress_step(R, j));
            ++it;
        }
        if (too_long()) throw invariant_error("recompression needs more than three iterations");
        st.iterations.emplace_back(j, it);
    }
    st.final_length = R.size();
    std::vector<char> keep(initial, 0);
    for (auto s : R.source) keep[s] = 1;
    return keep;
}

/// Forwards the k-th input iff mask[k].
class mask_filter final : public position_sink {
public:
    mask_filter(const std::vector<char>& mask, position_sink& out) : mask_(mask), out_(out) {}

    void push(std::size_t pos) override {
        if (k_ >= mask_.size()) throw invariant_error("replay produced more positions than the mask");
        if (mask_[k_++]) out_.push(pos);
    }
    void advance(std::size_t bound) override { out_.advance(bound); }
    void finish() override {
        if (k_ != mask_.size()) throw invariant_error("replay produced fewer positions than the mask");
        out_.finish();
    }

private:
    const std::vector<char>& mask_;
    position_sink& out_;
    std::size_t k_ = 0;
};

/// S' by one streaming pass (refinement + stage 1).
inline std::vector<std::size_t> compute_sprime(const Text& t, const ParamEnv& p, const refine_options& ro = {}) {
    collect_sink c;
    front_end fe(t, p, c);
    run_pipeline(t, p, fe, ro);
    return std::move(c.out);
}

/// Reruns refinement + stage 1 and keeps the S' positions selected by the mask.
inline std::vector<std::size_t> replay_to_sstar(const Text& t, const ParamEnv& p, const std::vector<char>& keep,
                                                const refine_options& ro = {}) {
    collect_sink c;
    mask_filter f(keep, c);
    front_end fe(t, p, f);
    run_pipeline(t, p, fe, ro);
    return std::move(c.out);
}

} // namespace tpset
