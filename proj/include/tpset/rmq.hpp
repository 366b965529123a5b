#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tpset {

/// Range-minimum over a fixed array. Blocks of 64 answer in-block queries with
/// a monotone-stack bitmask; a sparse table covers whole blocks.
class range_min {
public:
    range_min() = default;

    explicit range_min(std::vector<std::uint32_t> values) : v_(std::move(values)) {
        std::size_t n = v_.size();
        mask_.assign(n, 0);
        std::size_t nb = (n + 63) / 64;
        std::vector<std::uint32_t> block_arg(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            std::size_t lo = b * 64, hi = std::min(n, lo + 64);
            std::uint64_t cur = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                while (cur != 0) {
                    std::size_t top = lo + 63 - std::countl_zero(cur);
                    if (v_[top] > v_[i]) cur &= ~(std::uint64_t{1} << (top - lo));
                    else break;
                }
                cur |= std::uint64_t{1} << (i - lo);
                mask_[i] = cur;
            }
            block_arg[b] = static_cast<std::uint32_t>(lo + std::countr_zero(mask_[hi - 1]));
        }
        table_.push_back(std::move(block_arg));
        for (std::size_t len = 2; len <= nb; len *= 2) {
            const auto& prev = table_.back();
            std::vector<std::uint32_t> next(nb - len + 1);
            for (std::size_t i = 0; i + len <= nb; ++i) next[i] = better(prev[i], prev[i + len / 2]);
            table_.push_back(std::move(next));
        }
    }

    std::size_t size() const { return v_.size(); }
    std::uint32_t value(std::size_t i) const { return v_[i]; }

    /// Index of a minimum in [l, r] (inclusive); leftmost among ties.
    std::size_t argmin(std::size_t l, std::size_t r) const {
        if (l > r || r >= v_.size()) throw std::out_of_range("range_min query");
        std::size_t bl = l / 64, br = r / 64;
        if (bl == br) return in_block(l, r);
        std::uint32_t best = static_cast<std::uint32_t>(in_block(l, bl * 64 + 63));
        if (bl + 1 < br) {
            std::size_t span = br - bl - 1;
            unsigned lev = static_cast<unsigned>(std::bit_width(span) - 1);
            best = better(best, table_[lev][bl + 1]);
            best = better(best, table_[lev][br - (std::size_t{1} << lev)]);
        }
        return better(best, static_cast<std::uint32_t>(in_block(br * 64, r)));
    }

    std::uint32_t min(std::size_t l, std::size_t r) const { return v_[argmin(l, r)]; }

private:
    std::uint32_t better(std::uint32_t a, std::uint32_t b) const {
        if (v_[b] < v_[a] || (v_[b] == v_[a] && b < a)) return b;
        return a;
    }

    std::size_t in_block(std::size_t l, std::size_t r) const {
        std::size_t lo = l / 64 * 64;
        std::uint64_t m = mask_[r] & (~std::uint64_t{0} << (l - lo));
        return lo + std::countr_zero(m);
    }

    std::vector<std::uint32_t> v_;
    std::vector<std::uint64_t> mask_;
    std::vector<std::vector<std::uint32_t>> table_;
};

} // namespace tpset
