#pragma once

// Slow reference implementations used by tests and `tpset verify`.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tpset/bitops.hpp"
#include "tpset/sparse_tree.hpp"
#include "tpset/text.hpp"

namespace tpset::oracle {

inline std::size_t naive_lce(const Text& t, std::size_t p, std::size_t q) {
    if (p == q) return t.size() - std::min(p, t.size());
    std::size_t l = 0;
    while (p + l < t.size() && q + l < t.size() && t.at(p + l) == t.at(q + l)) ++l;
    return l;
}

/// Smallest p in [1..len] with t[i] = t[i-p] for all i of s[lo..hi).
inline std::size_t brute_period(const Text& t, std::size_t lo, std::size_t hi) {
    std::size_t len = hi - lo;
    for (std::size_t p = 1; p < len; ++p) {
        bool ok = true;
        for (std::size_t i = lo + p; i < hi && ok; ++i) ok = t.at(i) == t.at(i - p);
        if (ok) return p;
    }
    return len;
}

struct violation {
    std::string kind;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t d = 0;
};

struct PropertyReport {
    bool holds = true;
    std::size_t checked = 0;
    std::vector<violation> violations;

    void add(violation v) {
        holds = false;
        if (violations.size() < 16) violations.push_back(std::move(v));
    }

    std::string to_text() const {
        std::ostringstream os;
        for (const auto& v : violations) os << v.kind << " i=" << v.i << " j=" << v.j << " d=" << v.d << '\n';
        return os.str();
    }
};

namespace detail {

inline std::vector<char> membership(std::size_t n, const std::vector<std::size_t>& s) {
    std::vector<char> in(n + 1, 0);
    for (auto p : s)
        if (p < n) in[p] = 1;
    return in;
}

} // namespace detail

/// (a): equal windows s[i-tau..i+tau] imply i in S iff j in S, for i, j in [tau..n-tau).
inline PropertyReport check_property_a(const Text& t, const std::vector<std::size_t>& s, std::size_t tau) {
    PropertyReport rep;
    std::size_t n = t.size();
    if (n < 2 * tau + 1) return rep;
    auto in = detail::membership(n, s);
    std::vector<std::size_t> pos;
    for (std::size_t i = tau; i + tau < n; ++i) pos.push_back(i);
    auto less = [&](std::size_t a, std::size_t b) {
        for (std::size_t d = 0; d <= 2 * tau; ++d) {
            auto x = t.at(a - tau + d), y = t.at(b - tau + d);
            if (x != y) return x < y;
        }
        return false;
    };
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return less(a, b) || (!less(b, a) && a < b); });
    for (std::size_t g = 0; g < pos.size();) {
        std::size_t e = g + 1;
        while (e < pos.size() && !less(pos[g], pos[e])) ++e;
        std::size_t a_in = npos, a_out = npos;
        for (std::size_t x = g; x < e; ++x) {
            std::size_t& slot = in[pos[x]] ? a_in : a_out;
            if (slot == npos) slot = pos[x];
        }
        if (a_in != npos && a_out != npos) rep.add({"a", std::min(a_in, a_out), std::max(a_in, a_out), 0});
        rep.checked += e - g;
        g = e;
    }
    return rep;
}

/// (b) checked on every pair of S positions.
inline PropertyReport check_property_b_exhaustive(const Text& t, const std::vector<std::size_t>& s, std::size_t tau) {
    PropertyReport rep;
    auto in = detail::membership(t.size(), s);
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t y = x + 1; y < s.size(); ++y) {
            std::size_t i = s[x], j = s[y];
            std::size_t lce = naive_lce(t, i, j);
            ++rep.checked;
            if (lce == 0) continue;
            std::size_t ell = lce - 1; // largest ell with s[i..i+ell] = s[j..j+ell]
            for (std::size_t d = 0; d + tau < ell; ++d)
                if (in[i + d] != in[j + d]) {
                    rep.add({"b", i, j, d});
                    break;
                }
        }
    return rep;
}

/// (b) checked on suffix-order neighbours, which is equivalent: for a pair with
/// common extension L, every suffix sorted between them shares at least L with both.
inline PropertyReport check_property_b(const Text& t, const std::vector<std::size_t>& s, std::size_t tau) {
    PropertyReport rep;
    auto in = detail::membership(t.size(), s);
    std::vector<std::size_t> order(s);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        std::size_t l = naive_lce(t, a, b);
        return t.at(a + l) < t.at(b + l);
    });
    for (std::size_t x = 1; x < order.size(); ++x) {
        std::size_t i = order[x - 1], j = order[x];
        std::size_t lce = naive_lce(t, i, j);
        ++rep.checked;
        if (lce == 0) continue;
        std::size_t ell = lce - 1;
        for (std::size_t d = 0; d + tau < ell; ++d)
            if (in[i + d] != in[j + d]) {
                rep.add({"b", std::min(i, j), std::max(i, j), d});
                break;
            }
    }
    return rep;
}

/// (c): consecutive i < j in S with j - i > tau have s[i..j] of period at most tau/4.
inline PropertyReport check_property_c(const Text& t, const std::vector<std::size_t>& s, std::size_t tau) {
    PropertyReport rep;
    for (std::size_t x = 1; x < s.size(); ++x) {
        std::size_t i = s[x - 1], j = s[x];
        if (j - i <= tau) continue;
        ++rep.checked;
        std::size_t p = brute_period(t, i, j + 1);
        if (4 * p > tau) rep.add({"c", i, j, p});
    }
    return rep;
}

/// Every substring s[i..j] with period at most tau/4 has S ∩ [i+margin..j-margin] empty.
/// Checked on maximal runs of each period p <= tau/4.
inline PropertyReport check_c_converse(const Text& t, const std::vector<std::size_t>& s, std::size_t tau,
                                       std::size_t margin) {
    PropertyReport rep;
    std::size_t n = t.size();
    std::vector<std::size_t> prefix(n + 1, 0);
    auto in = detail::membership(n, s);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + in[i];
    for (std::size_t p = 1; 4 * p <= tau; ++p) {
        std::size_t x = p;
        while (x < n) {
            if (t.at(x) != t.at(x - p)) {
                ++x;
                continue;
            }
            std::size_t y = x;
            while (y + 1 < n && t.at(y + 1) == t.at(y + 1 - p)) ++y;
            std::size_t i = x - p, j = y; // s[i..j] has period p and is maximal
            ++rep.checked;
            if (j >= i + 2 * margin) {
                std::size_t lo = i + margin, hi = j - margin;
                if (prefix[hi + 1] - prefix[lo] > 0) {
                    std::size_t w = lo;
                    while (!in[w]) ++w;
                    rep.add({"c-converse", i, j, w});
                }
            }
            x = y + 1;
        }
    }
    return rep;
}

/// Suffixes of r at the given positions, sorted by direct comparison.
inline std::vector<std::size_t> naive_suffix_sort(const text_range& r, std::vector<std::size_t> pos) {
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        std::size_t l = r.scan_lce(a, b, npos);
        return r.at(a + l) < r.at(b + l);
    });
    return pos;
}

/// Compacted trie by naive sort and adjacent naive LCE.
inline sparse_tree oracle_trie(const text_range& r, const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> check(positions);
    std::sort(check.begin(), check.end());
    if (std::adjacent_find(check.begin(), check.end()) != check.end())
        throw std::invalid_argument("duplicate suffix positions");
    auto sorted = naive_suffix_sort(r, positions);
    std::vector<std::size_t> lcp(sorted.size(), 0);
    for (std::size_t i = 1; i < sorted.size(); ++i) lcp[i] = r.scan_lce(sorted[i - 1], sorted[i], npos);
    return sparse_tree::from_sorted(r.lo, r.hi, sorted, lcp);
}

namespace detail {

inline std::string label(const text_range& r, std::size_t start, std::size_t len) {
    std::string s;
    for (std::size_t x = 0; x < len; ++x) s += std::to_string(r.at(start + x)) + ",";
    return s;
}

inline std::string canon_node(const text_range& r, const sparse_tree& t, std::size_t v) {
    const auto& nd = t.nodes()[v];
    std::vector<std::string> kids;
    for (auto c : nd.children) {
        const auto& cn = t.nodes()[c];
        kids.push_back("<" + label(r, cn.edge_start, cn.edge_len) + ">" + canon_node(r, t, c));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    if (nd.leaf >= 0) s += "L" + std::to_string(nd.leaf);
    for (auto& k : kids) s += k;
    return s + ")";
}

// Builds the canonical string by recursive grouping on symbols, without any tree.
inline std::string canon_group(const text_range& r, std::vector<std::size_t> group, std::size_t depth) {
    if (group.size() == 1) {
        return "(L" + std::to_string(group[0]) + ")";
    }
    std::map<std::int64_t, std::vector<std::size_t>> by;
    for (auto p : group) by[r.at(p + depth)].push_back(p);
    std::vector<std::string> kids;
    for (auto& [sym, sub] : by) {
        std::size_t d = depth;
        if (sub.size() == 1) {
            std::size_t p = sub[0];
            kids.push_back("<" + label(r, p + depth, r.hi - p + 1 - depth) + ">(L" + std::to_string(p) + ")");
            continue;
        }
        // extend while all members agree
        ++d;
        for (;;) {
            bool same = true;
            for (auto p : sub) same = same && r.at(p + d) == r.at(sub[0] + d);
            if (!same) break;
            ++d;
        }
        kids.push_back("<" + label(r, sub[0] + depth, d - depth) + ">" + canon_group(r, sub, d));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
}

} // namespace detail

/// Canonical string of a tree: materialized edge labels, children sorted.
inline std::string canonical_form(const text_range& r, const sparse_tree& t) {
    return detail::canon_node(r, t, 0);
}

/// Canonical string of the compacted trie of the given suffixes, built by direct grouping.
inline std::string canonical_trie(const text_range& r, const std::vector<std::size_t>& positions) {
    if (positions.empty()) return "()";
    if (positions.size() == 1) {
        std::size_t p = positions[0];
        return "(<" + detail::label(r, p, r.hi - p + 1) + ">(L" + std::to_string(p) + "))";
    }
    return detail::canon_group(r, positions, 0);
}

/// Direct evaluation of one refinement phase over the whole position list.
inline std::vector<std::size_t> direct_phase(const Text& t, const std::vector<std::size_t>& prev, unsigned k) {
    const std::size_t m = prev.size();
    const std::size_t half = std::size_t{1} << (k - 1);
    const std::size_t wl = (std::size_t{1} << k) + 1;
    const unsigned cw = t.code_width();
    auto window_number = [&](std::size_t j) {
        Chunk c(wl * cw);
        for (std::size_t x = 0; x < wl; ++x) c.set_field(x * cw, cw, t.code(j + x));
        return c;
    };
    auto close = [&](std::size_t h) { return h + 1 < m && prev[h + 1] - prev[h] <= half; };
    std::vector<char> R(m + 2, 0);
    std::vector<vvalue> v1(m + 1, infinity), v2(m + 1, infinity), v3(m + 1, infinity), v4(m + 1, infinity);
    for (std::size_t h = 0; h < m; ++h) {
        if (!close(h)) continue;
        Chunk a = window_number(prev[h]), b = window_number(prev[h + 1]);
        if (a == b) R[h] = 1;
        else v1[h] = vbit(a, b);
    }
    for (std::size_t h = 0; h < m; ++h) v2[h] = vbit(v1[h], v1[h + 1]);
    for (std::size_t h = 0; h < m; ++h) v3[h] = vbit(v2[h], v2[h + 1]);
    for (std::size_t h = 0; h < m; ++h) v4[h] = vbit(v3[h], v3[h + 1]);
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < m; ++h) {
        bool far = h == 0 || prev[h] - prev[h - 1] > half || !close(h);
        bool local_min = h > 0 && v4[h - 1] != infinity && v4[h] != infinity && v4[h - 1] > v4[h] && v4[h] < v4[h + 1];
        bool starts_run = !(h > 0 && R[h - 1]) && R[h] && h + 2 < m && R[h + 1] && R[h + 2];
        bool ends_run = R[h] && !(h + 1 < m && R[h + 1]);
        if (far || local_min || starts_run || ends_run) out.push_back(prev[h]);
    }
    return out;
}

/// S_k for k = 0..phases by direct evaluation (S_0 = [0..n)).
inline std::vector<std::vector<std::size_t>> direct_refine_all(const Text& t, unsigned phases) {
    std::vector<std::vector<std::size_t>> all(1);
    for (std::size_t i = 0; i < t.size(); ++i) all[0].push_back(i);
    for (unsigned k = 1; k <= phases; ++k) all.push_back(direct_phase(t, all.back(), k));
    return all;
}

inline std::vector<std::size_t> direct_refine(const Text& t, const ParamEnv& p) {
    return direct_refine_all(t, p.phase_count).back();
}

/// S minus every h with i < h <= j, i, j in S, j - i <= tau/4 and s[i..i+tau/2] = s[j..j+tau/2].
inline std::vector<std::size_t> direct_stage1(const Text& t, const std::vector<std::size_t>& s, std::size_t tau) {
    std::vector<char> removed(s.size(), 0);
    std::size_t h2 = tau / 2;
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t y = x + 1; y < s.size() && s[y] - s[x] <= tau / 4; ++y) {
            bool eq = true;
            for (std::size_t d = 0; d <= h2 && eq; ++d) eq = t.at(s[x] + d) == t.at(s[y] + d);
            if (eq)
                for (std::size_t z = x + 1; z <= y; ++z) removed[z] = 1;
        }
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < s.size(); ++x)
        if (!removed[x]) out.push_back(s[x]);
    return out;
}


/// Letters of S' by direct evaluation: level-1 tuples compare whole windows s[q..q+tau/2] as numbers,
/// higher levels compare the packed tuples of the level below; `fields` are the four field widths.
inline std::vector<Chunk> direct_letters(const Text& t, const std::vector<std::size_t>& sp, std::size_t tau,
                                         std::size_t ell, const std::array<unsigned, 4>& fields) {
    const std::size_t m = sp.size(), reach = tau >> 5, wl = tau / 2 + 1;
    const unsigned cw = t.code_width();
    std::vector<Chunk> cur(m);
    for (std::size_t i = 0; i < m; ++i) {
        cur[i] = Chunk(wl * cw);
        for (std::size_t x = 0; x < wl; ++x) cur[i].set_field(x * cw, cw, t.code(sp[i] + x));
    }
    for (int level = 0; level < 4; ++level) {
        std::vector<Chunk> next(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<vvalue> w(ell, infinity);
            std::size_t k = 0;
            for (std::size_t x = i + 1; x < m && sp[x] <= sp[i] + reach; ++x) w.at(k++) = vbit(cur[i], cur[x]);
            next[i] = encode_tuple(w, fields[level]);
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace tpset::oracle
