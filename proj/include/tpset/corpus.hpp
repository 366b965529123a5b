#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpset/text.hpp"

namespace tpset {

/// 64-bit linear congruential generator (Knuth's MMIX constants).
/// state' = state * 6364136223846793005 + 1442695040888963407; output = high 32 bits of state'.
class lcg64 {
public:
    explicit lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint32_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::uint32_t>(state_ >> 32);
    }

    /// next() mod bound.
    std::uint32_t below(std::uint32_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

enum class corpus_kind { random, periodic, fibonacci, runs };

inline corpus_kind parse_corpus_kind(const std::string& s) {
    if (s == "random") return corpus_kind::random;
    if (s == "periodic") return corpus_kind::periodic;
    if (s == "fibonacci") return corpus_kind::fibonacci;
    if (s == "runs") return corpus_kind::runs;
    throw std::invalid_argument("unknown corpus kind: " + s);
}

namespace gen {

/// Uniform symbols in [0..sigma).
inline std::vector<std::uint32_t> random(std::size_t n, std::uint32_t sigma, std::uint64_t seed) {
    lcg64 g(seed);
    std::vector<std::uint32_t> v(n);
    for (auto& c : v) c = g.below(sigma);
    return v;
}

/// A random word of length `period` repeated.
inline std::vector<std::uint32_t> periodic(std::size_t n, std::uint32_t sigma, std::size_t period, std::uint64_t seed) {
    auto base = random(period, sigma, seed);
    std::vector<std::uint32_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = base[i % period];
    return v;
}

/// Prefix of the infinite Fibonacci word 0100101001001... (f1 = 0, f2 = 01, f_k = f_{k-1} f_{k-2}).
inline std::vector<std::uint32_t> fibonacci(std::size_t n) {
    std::vector<std::uint32_t> a{0}, b{0, 1};
    while (b.size() < n) {
        std::vector<std::uint32_t> c(b);
        c.insert(c.end(), a.begin(), a.end());
        a = std::move(b);
        b = std::move(c);
    }
    b.resize(n);
    return b;
}

/// Runs of one random symbol each, run lengths uniform in [1..32].
inline std::vector<std::uint32_t> runs(std::size_t n, std::uint32_t sigma, std::uint64_t seed) {
    lcg64 g(seed);
    std::vector<std::uint32_t> v;
    v.reserve(n);
    while (v.size() < n) {
        std::uint32_t c = g.below(sigma);
        std::size_t len = 1 + g.below(32);
        for (std::size_t i = 0; i < len && v.size() < n; ++i) v.push_back(c);
    }
    return v;
}

inline std::vector<std::uint32_t> make(corpus_kind k, std::size_t n, std::uint32_t sigma, std::uint64_t seed,
                                       std::size_t period = 5) {
    if (sigma == 0) throw std::invalid_argument("sigma must be positive");
    switch (k) {
    case corpus_kind::random: return random(n, sigma, seed);
    case corpus_kind::periodic: return periodic(n, sigma, period == 0 ? 1 : period, seed);
    case corpus_kind::fibonacci: return fibonacci(n);
    case corpus_kind::runs: return runs(n, sigma, seed);
    }
    return {};
}

/// Maps small alphabets onto letters starting at 'a'.
inline Text as_letters(std::vector<std::uint32_t> v) {
    for (auto& c : v) c += 'a';
    return Text(std::move(v));
}

} // namespace gen

} // namespace tpset
