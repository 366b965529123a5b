#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "tpset/bitops.hpp"
#include "tpset/lce_provider.hpp"
#include "tpset/sparse_tree.hpp"
#include "tpset/text.hpp"

namespace tpset {

/// Receiver of an increasing position stream.
class position_sink {
public:
    virtual ~position_sink() = default;
    virtual void push(std::size_t pos) = 0;
    /// Every position below `bound` has been pushed.
    virtual void advance(std::size_t bound) = 0;
    virtual void finish() = 0;
};

/// Collects a stream into a vector.
class collect_sink final : public position_sink {
public:
    void push(std::size_t pos) override { out.push_back(pos); }
    void advance(std::size_t) override {}
    void finish() override { done = true; }

    std::vector<std::size_t> out;
    bool done = false;
};

/// v' for windows s[j..j+2^k] and s[j2..j2+2^k] whose common extension is l < 2^k + 1.
inline vvalue vprime_from_lce(const Text& t, std::size_t j, std::size_t j2, std::size_t l) {
    std::uint64_t a = t.code(j + l), b = t.code(j2 + l);
    unsigned lb = lbit(a, b);
    return 2 * (vvalue{t.code_width()} * l + lb) + ((a >> lb) & 1);
}

/// R(j): the next position j2 is within 2^{k-1} and both 2^k-windows are equal.
inline bool predicate_R(const Text& t, unsigned k, std::size_t j, std::size_t j2, lce_provider& prov) {
    (void)t;
    std::size_t half = std::size_t{1} << (k - 1), wl = (std::size_t{1} << k) + 1;
    if (j2 - j > half) return false;
    return prov.capped_lce(j, j2, wl) >= wl;
}

/// v_h for the first of up to six consecutive positions; positions past the span do not exist.
inline vvalue v_chain(const Text& t, unsigned k, std::span<const std::size_t> pos, lce_provider& prov) {
    std::size_t half = std::size_t{1} << (k - 1), wl = (std::size_t{1} << k) + 1;
    std::array<vvalue, 8> v;
    v.fill(infinity);
    for (std::size_t h = 0; h < 5 && h + 1 < pos.size(); ++h) {
        if (pos[h + 1] - pos[h] > half) continue;
        std::size_t l = prov.capped_lce(pos[h], pos[h + 1], wl);
        if (l < wl) v[h] = vprime_from_lce(t, pos[h], pos[h + 1], l);
    }
    for (int lvl = 0; lvl < 3; ++lvl)
        for (std::size_t h = 0; h < 5; ++h) v[h] = vbit(v[h], v[h + 1]);
    return v[0];
}

struct phase_stats {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::size_t max_buffer = 0;
    std::size_t queries = 0;
    vvalue max_finite_v = 0;
};

/// Optional event log of one phase.
struct phase_trace {
    /// (input bound, outputs emitted so far) after every input event.
    std::vector<std::pair<std::size_t, std::size_t>> progress;
    /// (i, j, input bound before the event that issued the query).
    std::vector<std::array<std::size_t, 3>> queries;
};

/// Phase k of the refinement: consumes S_{k-1}, emits S_k.
class refine_phase final : public position_sink {
public:
    refine_phase(const Text& t, unsigned k, lce_provider& prov, position_sink& out)
        : t_(t), k_(k), half_(std::size_t{1} << (k - 1)), wl_((std::size_t{1} << k) + 1), prov_(&prov), out_(out) {
        if (k == 0) throw std::invalid_argument("phase index must be at least 1");
    }

    void set_provider(lce_provider& p) { prov_ = &p; }
    void set_trace(phase_trace* tr) { trace_ = tr; }
    void set_tap(std::vector<std::size_t>* tap) { tap_ = tap; }
    const phase_stats& stats() const { return stats_; }
    unsigned k() const { return k_; }

    void push(std::size_t x) override {
        if (finished_) throw std::logic_error("push after finish");
        if (x < bound_) throw std::invalid_argument("positions must arrive in increasing order");
        prev_bound_ = bound_;
        ++stats_.inputs;
        if (!buf_.empty() && buf_.back().big == tri::unknown) resolve(buf_.back(), x);
        buf_.push_back(entry{x});
        bound_ = std::max(bound_, x + 1);
        stats_.max_buffer = std::max(stats_.max_buffer, buf_.size());
        drain();
    }

    void advance(std::size_t bound) override {
        prev_bound_ = bound_;
        bound_ = std::max(bound_, bound);
        if (!buf_.empty()) {
            entry& e = buf_.back();
            if (e.big == tri::unknown && bound_ - e.pos > half_) mark_far(e);
        }
        drain();
    }

    void finish() override {
        if (finished_) return;
        finished_ = true;
        if (!buf_.empty() && buf_.back().big == tri::unknown) mark_far(buf_.back());
        drain();
        if (next_ != base_ + buf_.size()) throw invariant_error("undecided positions at end of stream");
        out_.finish();
    }

private:
    enum class tri : std::uint8_t { no, yes, unknown };
    static constexpr vvalue unknown_v = infinity - 1;

    struct entry {
        std::size_t pos;
        tri big = tri::unknown; // gap to the successor exceeds 2^{k-1}
        tri r = tri::unknown;
        std::array<vvalue, 4> v{unknown_v, unknown_v, unknown_v, unknown_v};
    };

    static tri t_not(tri a) { return a == tri::unknown ? a : (a == tri::yes ? tri::no : tri::yes); }
    static tri t_and(std::initializer_list<tri> xs) {
        tri r = tri::yes;
        for (tri x : xs) {
            if (x == tri::no) return tri::no;
            if (x == tri::unknown) r = tri::unknown;
        }
        return r;
    }
    static tri t_or(std::initializer_list<tri> xs) {
        tri r = tri::no;
        for (tri x : xs) {
            if (x == tri::yes) return tri::yes;
            if (x == tri::unknown) r = tri::unknown;
        }
        return r;
    }
    static tri t_less(vvalue x, vvalue y) {
        if (x == infinity) return tri::no;
        if (x == unknown_v || y == unknown_v) return tri::unknown;
        if (y == infinity) return tri::yes;
        return x < y ? tri::yes : tri::no;
    }
    static tri t_finite(vvalue x) {
        if (x == unknown_v) return tri::unknown;
        return x == infinity ? tri::no : tri::yes;
    }

    void mark_far(entry& e) {
        e.big = tri::yes;
        e.r = tri::no;
        e.v[0] = infinity;
    }

    void resolve(entry& e, std::size_t next) {
        if (next - e.pos > half_) {
            mark_far(e);
            return;
        }
        e.big = tri::no;
        std::size_t l = prov_->capped_lce(e.pos, next, wl_);
        ++stats_.queries;
        if (trace_) trace_->queries.push_back({e.pos, next, prev_bound_});
        if (l >= wl_) {
            e.r = tri::yes;
            e.v[0] = infinity;
        } else {
            e.r = tri::no;
            e.v[0] = vprime_from_lce(t_, e.pos, next, l);
        }
    }

    bool has(std::size_t h) const { return h >= base_ && h < base_ + buf_.size(); }
    entry& at(std::size_t h) { return buf_[h - base_]; }

    vvalue get_v(std::size_t h, int lvl) {
        if (!has(h)) {
            if (h < base_) throw invariant_error("refinement needs a discarded position");
            return finished_ ? infinity : unknown_v;
        }
        entry& e = at(h);
        if (e.v[lvl] != unknown_v || lvl == 0) return e.v[lvl];
        vvalue a = get_v(h, lvl - 1);
        if (a == infinity) return e.v[lvl] = infinity;
        vvalue b = get_v(h + 1, lvl - 1);
        if (b == infinity) return e.v[lvl] = infinity;
        if (a == unknown_v || b == unknown_v) return unknown_v;
        vvalue r = vbit(a, b);
        if (lvl == 3) stats_.max_finite_v = std::max(stats_.max_finite_v, r);
        return e.v[lvl] = r;
    }

    tri get_r(std::size_t h) {
        if (!has(h)) return finished_ ? tri::no : tri::unknown;
        return at(h).r;
    }

    tri decide(std::size_t h) {
        bool first = h == 0;
        tri far = t_or({first ? tri::yes : at(h - 1).big, at(h).big});
        if (far == tri::yes) return far;
        vvalue vp = first ? infinity : get_v(h - 1, 3);
        vvalue vh = get_v(h, 3);
        vvalue vn = get_v(h + 1, 3);
        tri local_min = t_and({t_finite(vp), t_less(vh, vp), t_less(vh, vn)});
        tri rp = first ? tri::no : get_r(h - 1);
        tri rh = get_r(h);
        tri starts_run = t_and({t_not(rp), rh, get_r(h + 1), get_r(h + 2)});
        tri ends_run = t_and({rh, t_not(get_r(h + 1))});
        return t_or({far, local_min, starts_run, ends_run});
    }

    void drain() {
        while (has(next_)) {
            tri d = decide(next_);
            if (d == tri::unknown) break;
            if (d == tri::yes) {
                std::size_t p = at(next_).pos;
                ++stats_.outputs;
                if (tap_) tap_->push_back(p);
                out_.push(p);
            }
            ++next_;
            while (base_ + 1 < next_) {
                buf_.pop_front();
                ++base_;
            }
        }
        if (trace_) trace_->progress.emplace_back(bound_, stats_.outputs);
        out_.advance(has(next_) ? std::min(at(next_).pos, bound_) : bound_);
    }

    const Text& t_;
    unsigned k_;
    std::size_t half_, wl_;
    lce_provider* prov_;
    position_sink& out_;
    std::deque<entry> buf_;
    std::size_t base_ = 0, next_ = 0;
    std::size_t bound_ = 0, prev_bound_ = 0;
    bool finished_ = false;
    phase_stats stats_;
    phase_trace* trace_ = nullptr;
    std::vector<std::size_t>* tap_ = nullptr;
};

struct level_stats {
    std::size_t k = 0;
    std::size_t window = 0;
    std::size_t trees = 0;
    std::size_t max_leaves = 0;
    std::size_t total_leaves = 0;
    std::size_t max_buffer = 0;
    std::size_t build_symbols = 0;
};

/// Entry of one level in the leveled scheme. Buffers S_k, builds a sparse tree over
/// S_k ∩ s[iW..(i+3)W) and then releases S_k ∩ [(i+1)W..(i+2)W) to the level's phases,
/// answering their queries from that tree.
class level_gate final : public position_sink, public lce_provider {
public:
    level_gate(const Text& t, std::size_t k, std::size_t window, position_sink& out)
        : t_(t), k_(k), w_(window), out_(out) {
        st_.k = k;
        st_.window = window;
    }

    const level_stats& stats() const { return st_; }

    void push(std::size_t x) override {
        buf_.push_back(x);
        bound_ = std::max(bound_, x + 1);
        st_.max_buffer = std::max(st_.max_buffer, buf_.size());
        pump();
    }

    void advance(std::size_t bound) override {
        bound_ = std::max(bound_, bound);
        pump();
    }

    void finish() override {
        finished_ = true;
        pump();
        out_.finish();
    }

protected:
    std::size_t compute(std::size_t i, std::size_t j, std::size_t cap) override {
        if (!ready_) throw invariant_error("level queried before its first tree");
        if (i < lo_ || j < lo_ || i >= hi_ || j >= hi_) throw invariant_error("LCE query outside the level window");
        std::size_t l = tree_.lce(i, j);
        if (l < cap && l == hi_ - std::max(i, j) && hi_ < t_.size())
            throw invariant_error("LCE query runs past the level window");
        return std::min(cap, l);
    }

private:
    void pump() {
        const std::size_t n = t_.size();
        while (!done_) {
            std::size_t i = next_i_;
            std::size_t lo = i * w_, hi = std::min(n, (i + 3) * w_);
            if (!(finished_ || bound_ >= hi)) return;
            std::vector<std::size_t> q;
            for (auto p : buf_)
                if (p >= lo && p < hi) q.push_back(p);
            text_range r(t_, lo, hi);
            tree_ = build_sparse_tree(r, q, std::size_t{8} << k_);
            lo_ = lo;
            hi_ = hi;
            ready_ = true;
            ++st_.trees;
            st_.max_leaves = std::max(st_.max_leaves, q.size());
            st_.total_leaves += q.size();
            st_.build_symbols += hi - lo;
            build_symbols_ += hi - lo;

            std::size_t rel_lo = i == 0 ? 0 : (i + 1) * w_;
            std::size_t rel_hi = (i + 2) * w_;
            for (auto p : buf_)
                if (p >= rel_lo && p < rel_hi) out_.push(p);
            out_.advance(std::min(rel_hi, n));
            std::size_t keep = (i + 1) * w_;
            while (!buf_.empty() && buf_.front() < keep) buf_.pop_front();
            ++next_i_;
            if (rel_hi >= n) done_ = true;
        }
    }

    const Text& t_;
    std::size_t k_, w_;
    position_sink& out_;
    std::deque<std::size_t> buf_;
    std::size_t bound_ = 0;
    bool finished_ = false, done_ = false, ready_ = false;
    std::size_t next_i_ = 0;
    std::size_t lo_ = 0, hi_ = 0;
    sparse_tree tree_;
    level_stats st_;
};

enum class provider_scheme { automatic, naive, whole_text, window, leveled };

struct refine_options {
    provider_scheme scheme = provider_scheme::automatic;
    /// Block length of the window scheme (0: max(floor(sqrt n), 6 * 2^K)).
    std::size_t window_len = 0;
    /// If set, S_k for k = 1..K is appended to taps[k - 1].
    std::vector<std::vector<std::size_t>>* taps = nullptr;
    std::vector<phase_trace>* traces = nullptr;
    std::vector<lce_query_record>* query_log = nullptr;
};

struct refine_stats {
    provider_scheme scheme = provider_scheme::naive;
    std::vector<phase_stats> phases;
    std::vector<level_stats> levels;
    std::size_t provider_queries = 0;
    std::size_t build_symbols = 0;
    std::size_t window_len = 0;
};

/// Phase grouping of the leveled scheme: (phases per level, bhat).
inline std::pair<unsigned, std::size_t> level_shape(const ParamEnv& p) {
    double logn = std::log2(static_cast<double>(std::max<std::size_t>(p.n, 2)));
    std::size_t bhat = std::max<std::size_t>(2, static_cast<std::size_t>(static_cast<double>(p.b) / logn));
    unsigned per = std::max(1u, static_cast<unsigned>(std::bit_width(bhat) - 1));
    return {per, bhat};
}

inline provider_scheme resolve_scheme(const ParamEnv& p, provider_scheme s) {
    if (s != provider_scheme::automatic) return s;
    if (p.run_mode == mode::desk) return provider_scheme::whole_text;
    return p.tau * p.tau < p.n ? provider_scheme::window : provider_scheme::leveled;
}

/// Streams S_K (K = p.phase_count) into `out`.
inline void run_pipeline(const Text& t, const ParamEnv& p, position_sink& out, const refine_options& opt = {},
                         refine_stats* stats = nullptr) {
    const unsigned K = p.phase_count;
    const std::size_t n = t.size();
    provider_scheme scheme = resolve_scheme(p, opt.scheme);
    if (opt.taps) opt.taps->assign(K, {});
    if (opt.traces) opt.traces->assign(K, {});

    std::vector<std::unique_ptr<lce_provider>> providers;
    std::vector<level_gate*> gates;
    std::vector<std::unique_ptr<refine_phase>> phases(K);
    std::vector<std::unique_ptr<level_gate>> gate_store;
    std::size_t window_len = 0;

    // phases are wired back to front
    position_sink* next = &out;
    if (scheme == provider_scheme::leveled && K > 0) {
        auto [per, bhat] = level_shape(p);
        unsigned levels = (K + per - 1) / per;
        for (unsigned lv = levels; lv-- > 0;) {
            unsigned k0 = lv * per; // input set S_{k0}
            unsigned k_last = std::min(K, k0 + per);
            std::size_t w = bhat << (k0 + 3);
            // the gate is both the entry sink and the provider of its phases
            std::vector<refine_phase*> mine;
            naive_provider placeholder(t);
            for (unsigned k = k_last; k > k0; --k) {
                phases[k - 1] = std::make_unique<refine_phase>(t, k, placeholder, *next);
                next = phases[k - 1].get();
                mine.push_back(phases[k - 1].get());
            }
            gate_store.push_back(std::make_unique<level_gate>(t, k0, w, *next));
            level_gate* g = gate_store.back().get();
            for (auto* ph : mine) ph->set_provider(*g);
            if (opt.query_log) g->set_log(opt.query_log);
            gates.push_back(g);
            next = g;
        }
        std::reverse(gates.begin(), gates.end());
    } else if (K > 0) {
        lce_provider* prov = nullptr;
        if (scheme == provider_scheme::naive) {
            providers.push_back(std::make_unique<naive_provider>(t));
        } else if (scheme == provider_scheme::whole_text) {
            providers.push_back(std::make_unique<whole_text_provider>(t));
        } else {
            window_len = opt.window_len;
            if (window_len == 0)
                window_len = std::max<std::size_t>(static_cast<std::size_t>(std::sqrt(static_cast<double>(n))),
                                                   std::size_t{6} << K);
            if (window_len < (std::size_t{6} << K)) throw std::invalid_argument("window length below 6 * 2^K");
            providers.push_back(std::make_unique<window_provider>(t, window_len));
        }
        prov = providers.back().get();
        if (opt.query_log) prov->set_log(opt.query_log);
        for (unsigned k = K; k >= 1; --k) {
            phases[k - 1] = std::make_unique<refine_phase>(t, k, *prov, *next);
            next = phases[k - 1].get();
        }
    }
    for (unsigned k = 1; k <= K; ++k) {
        if (opt.taps) phases[k - 1]->set_tap(&(*opt.taps)[k - 1]);
        if (opt.traces) phases[k - 1]->set_trace(&(*opt.traces)[k - 1]);
    }

    for (std::size_t x = 0; x < n; ++x) {
        for (auto& pr : providers) pr->on_feed(x);
        next->push(x);
    }
    next->finish();

    if (stats) {
        stats->scheme = K == 0 ? provider_scheme::naive : scheme;
        stats->phases.clear();
        for (auto& ph : phases) stats->phases.push_back(ph->stats());
        stats->levels.clear();
        stats->provider_queries = 0;
        stats->build_symbols = 0;
        for (auto* g : gates) {
            stats->levels.push_back(g->stats());
            stats->provider_queries += g->queries();
            stats->build_symbols += g->build_symbols();
        }
        for (auto& pr : providers) {
            stats->provider_queries += pr->queries();
            stats->build_symbols += pr->build_symbols();
        }
        stats->window_len = window_len;
    }
}

/// S_K as a vector.
inline std::vector<std::size_t> refine_positions(const Text& t, const ParamEnv& p, const refine_options& opt = {},
                                                 refine_stats* stats = nullptr) {
    collect_sink c;
    run_pipeline(t, p, c, opt, stats);
    return std::move(c.out);
}

} // namespace tpset
