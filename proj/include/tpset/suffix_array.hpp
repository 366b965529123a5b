#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tpset/rmq.hpp"
#include "tpset/text.hpp"

namespace tpset {

namespace detail {

// SA-IS over s with values in [0..upper].
inline std::vector<std::int32_t> sa_is(const std::vector<std::int32_t>& s, std::int32_t upper) {
    const std::int32_t n = static_cast<std::int32_t>(s.size());
    if (n == 0) return {};
    if (n == 1) return {0};
    if (n == 2) return s[0] < s[1] ? std::vector<std::int32_t>{0, 1} : std::vector<std::int32_t>{1, 0};

    std::vector<std::int32_t> sa(n);
    std::vector<bool> ls(n, false); // true: S-type
    for (std::int32_t i = n - 2; i >= 0; --i) ls[i] = s[i] == s[i + 1] ? ls[i + 1] : s[i] < s[i + 1];

    std::vector<std::int32_t> sum_l(upper + 1, 0), sum_s(upper + 1, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        if (!ls[i]) ++sum_s[s[i]];
        else ++sum_l[s[i] + 1];
    }
    for (std::int32_t i = 0; i <= upper; ++i) {
        sum_s[i] += sum_l[i];
        if (i < upper) sum_l[i + 1] += sum_s[i];
    }

    auto induce = [&](const std::vector<std::int32_t>& lms) {
        std::fill(sa.begin(), sa.end(), -1);
        std::vector<std::int32_t> buf(sum_s);
        for (auto d : lms)
            if (d != n) sa[buf[s[d]]++] = d;
        buf = sum_l;
        sa[buf[s[n - 1]]++] = n - 1;
        for (std::int32_t i = 0; i < n; ++i) {
            std::int32_t v = sa[i];
            if (v >= 1 && !ls[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
        }
        buf = sum_l;
        for (std::int32_t i = n - 1; i >= 0; --i) {
            std::int32_t v = sa[i];
            if (v >= 1 && ls[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
        }
    };

    std::vector<std::int32_t> lms_map(n + 1, -1);
    std::int32_t m = 0;
    for (std::int32_t i = 1; i < n; ++i)
        if (!ls[i - 1] && ls[i]) lms_map[i] = m++;
    std::vector<std::int32_t> lms;
    lms.reserve(m);
    for (std::int32_t i = 1; i < n; ++i)
        if (!ls[i - 1] && ls[i]) lms.push_back(i);

    induce(lms);

    if (m) {
        std::vector<std::int32_t> sorted_lms;
        sorted_lms.reserve(m);
        for (auto v : sa)
            if (lms_map[v] != -1) sorted_lms.push_back(v);
        std::vector<std::int32_t> rec_s(m);
        std::int32_t rec_upper = 0;
        rec_s[lms_map[sorted_lms[0]]] = 0;
        for (std::int32_t i = 1; i < m; ++i) {
            std::int32_t l = sorted_lms[i - 1], r = sorted_lms[i];
            std::int32_t end_l = lms_map[l] + 1 < m ? lms[lms_map[l] + 1] : n;
            std::int32_t end_r = lms_map[r] + 1 < m ? lms[lms_map[r] + 1] : n;
            bool same = true;
            if (end_l - l != end_r - r) {
                same = false;
            } else {
                while (l < end_l) {
                    if (s[l] != s[r]) break;
                    ++l;
                    ++r;
                }
                if (l == n || s[l] != s[r]) same = false;
            }
            if (!same) ++rec_upper;
            rec_s[lms_map[sorted_lms[i]]] = rec_upper;
        }
        auto rec_sa = sa_is(rec_s, rec_upper);
        for (std::int32_t i = 0; i < m; ++i) sorted_lms[i] = lms[rec_sa[i]];
        induce(sorted_lms);
    }
    return sa;
}

} // namespace detail

/// Suffix array of an integer string with values in [0..upper].
inline std::vector<std::int32_t> suffix_array(const std::vector<std::int32_t>& s, std::int32_t upper) {
    return detail::sa_is(s, upper);
}

/// lcp[i] = lcp(suffix sa[i-1], suffix sa[i]); lcp[0] = 0.
inline std::vector<std::uint32_t> lcp_array(const std::vector<std::int32_t>& s, const std::vector<std::int32_t>& sa) {
    std::size_t n = s.size();
    std::vector<std::int32_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<std::int32_t>(i);
    std::vector<std::uint32_t> lcp(n, 0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (h > 0) --h;
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
        lcp[rank[i]] = static_cast<std::uint32_t>(h);
    }
    return lcp;
}

/// Exact LCE over the substring [lo, hi) of a text; reads at or past hi are the sentinel.
class substring_lce {
public:
    substring_lce() = default;

    substring_lce(const Text& t, std::size_t lo, std::size_t hi) : lo_(lo), hi_(hi) {
        std::vector<std::uint32_t> syms(t.symbols().begin() + lo, t.symbols().begin() + hi);
        std::vector<std::uint32_t> alpha(syms);
        std::sort(alpha.begin(), alpha.end());
        alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
        std::vector<std::int32_t> s(syms.size());
        for (std::size_t i = 0; i < syms.size(); ++i)
            s[i] = static_cast<std::int32_t>(std::lower_bound(alpha.begin(), alpha.end(), syms[i]) - alpha.begin());
        auto sa = suffix_array(s, alpha.empty() ? 0 : static_cast<std::int32_t>(alpha.size() - 1));
        auto lcp = lcp_array(s, sa);
        rank_.resize(s.size());
        for (std::size_t i = 0; i < sa.size(); ++i) rank_[sa[i]] = static_cast<std::uint32_t>(i);
        rmq_ = range_min(std::move(lcp));
    }

    std::size_t lo() const { return lo_; }
    std::size_t hi() const { return hi_; }

    /// LCE of absolute positions i, j in [lo, hi), truncated at hi.
    std::size_t lce(std::size_t i, std::size_t j) const {
        if (i == j) return hi_ - i;
        std::size_t a = rank_[i - lo_], b = rank_[j - lo_];
        if (a > b) std::swap(a, b);
        return rmq_.min(a + 1, b);
    }

private:
    std::size_t lo_ = 0, hi_ = 0;
    std::vector<std::uint32_t> rank_;
    range_min rmq_;
};

} // namespace tpset
