#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tpset {

/// Thrown when an internal invariant of the construction is broken.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class text_format { bytes, u32le };
enum class mode { reference, desk };

/// Immutable symbol sequence. Reads past the end yield the sentinel -1,
/// which compares smaller than every symbol.
class Text {
public:
    Text() = default;

    explicit Text(std::vector<std::uint32_t> symbols) : sym_(std::move(symbols)) {
        std::uint64_t mx = 0;
        for (auto c : sym_) mx = std::max<std::uint64_t>(mx, c);
        sigma_bound_ = sym_.empty() ? 1 : mx + 1;
        w_ = 1;
        while ((std::uint64_t{1} << w_) < sigma_bound_) ++w_;
        code_width_ = static_cast<unsigned>(std::bit_width(sigma_bound_));
    }

    static Text from_string(std::string_view s) {
        std::vector<std::uint32_t> v(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i) v[i] = static_cast<unsigned char>(s[i]);
        return Text(std::move(v));
    }

    std::size_t size() const { return sym_.size(); }
    bool empty() const { return sym_.empty(); }

    std::int64_t at(std::size_t i) const { return i < sym_.size() ? std::int64_t{sym_[i]} : -1; }

    /// Value used when symbols are read as bit strings. The sentinel maps to
    /// sigma_bound so that it differs from every real symbol.
    std::uint64_t code(std::size_t i) const { return i < sym_.size() ? sym_[i] : sigma_bound_; }

    std::uint64_t sigma_bound() const { return sigma_bound_; }
    /// Smallest w >= 1 with sigma_bound <= 2^w.
    unsigned w() const { return w_; }
    /// Bits per symbol in the packed window encoding (includes the sentinel code).
    unsigned code_width() const { return code_width_; }

    std::span<const std::uint32_t> symbols() const { return sym_; }

private:
    std::vector<std::uint32_t> sym_;
    std::uint64_t sigma_bound_ = 1;
    unsigned w_ = 1;
    unsigned code_width_ = 1;
};

inline Text load_text(std::span<const std::byte> raw, text_format fmt) {
    if (fmt == text_format::bytes) {
        std::vector<std::uint32_t> v(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) v[i] = std::to_integer<std::uint32_t>(raw[i]);
        return Text(std::move(v));
    }
    if (raw.size() % 4 != 0) throw std::invalid_argument("u32le input length is not a multiple of 4");
    std::vector<std::uint32_t> v(raw.size() / 4);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint32_t x = 0;
        for (int b = 3; b >= 0; --b) x = (x << 8) | std::to_integer<std::uint32_t>(raw[4 * i + b]);
        v[i] = x;
    }
    return Text(std::move(v));
}

inline Text load_text_file(const std::string& path, text_format fmt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_text(std::as_bytes(std::span<const char>(buf)), fmt);
}

struct param_overrides {
    std::optional<unsigned> lambda3;
    std::optional<unsigned> lambda4;
};

/// Derived parameters of one construction.
struct ParamEnv {
    std::size_t n = 0;
    std::size_t tau = 0;
    std::size_t b = 0;
    unsigned code_width = 1;
    unsigned lambda3 = 2;
    unsigned lambda4 = 1;
    unsigned phase_count = 0;
    mode run_mode = mode::desk;
};

namespace detail {

// Values below `bound` need bit_width(bound - 1) bits; vbit of such values stays below twice that.
inline std::uint64_t vbit_bound(std::uint64_t bound) {
    return 2 * std::max<std::uint64_t>(1, std::bit_width(bound - 1));
}

} // namespace detail

/// lambda3 from the iterated vbit bound: three more vbit rounds starting from values < 2*n*w.
inline unsigned reference_lambda3(std::size_t n, unsigned code_width) {
    std::uint64_t bound = 2 * std::max<std::uint64_t>(n, 1) * code_width;
    for (int r = 0; r < 3; ++r) bound = detail::vbit_bound(bound);
    // every finite value is < bound; need bound <= 2L + 3
    std::uint64_t l = bound > 3 ? (bound - 3 + 1) / 2 : 0;
    return static_cast<unsigned>(std::max<std::uint64_t>(2, l));
}

inline unsigned reference_lambda4(std::size_t n) {
    double x = static_cast<double>(std::max<std::size_t>(n, 2));
    for (int r = 0; r < 4; ++r) {
        if (x <= 1.0) return 1;
        x = std::log2(x);
    }
    return static_cast<unsigned>(std::max(1.0, std::ceil(x)));
}

/// Largest K >= 0 with 16 * lambda3 * 2^K <= tau, or 0.
inline unsigned phase_count_for(std::size_t tau, unsigned lambda3) {
    unsigned k = 0;
    while ((std::uint64_t{16} * lambda3 << (k + 1)) <= tau) ++k;
    return k;
}

inline ParamEnv make_params(std::size_t n, unsigned code_width, std::size_t tau, mode m,
                            const param_overrides& ov = {}) {
    if (n < 8) throw std::invalid_argument("text too short (need n >= 8)");
    if (tau < 4) throw std::invalid_argument("tau must be at least 4");
    if (tau > n / 2) throw std::invalid_argument("tau must be at most n/2");
    ParamEnv p;
    p.n = n;
    p.tau = tau;
    p.b = n / tau;
    p.code_width = code_width;
    p.run_mode = m;
    if (m == mode::reference) {
        if (ov.lambda3 || ov.lambda4) throw std::invalid_argument("lambda overrides are only accepted in desk mode");
        p.lambda3 = reference_lambda3(n, code_width);
        p.lambda4 = reference_lambda4(n);
    } else {
        p.lambda3 = ov.lambda3.value_or(reference_lambda3(n, code_width));
        p.lambda4 = ov.lambda4.value_or(10);
        if (p.lambda3 < 2) throw std::invalid_argument("lambda3 must be at least 2");
        if (p.lambda4 < 1) throw std::invalid_argument("lambda4 must be at least 1");
        if (p.lambda3 > 1024 || p.lambda4 > 48) throw std::invalid_argument("lambda override too large");
    }
    p.phase_count = phase_count_for(tau, p.lambda3);
    return p;
}

inline ParamEnv make_params(const Text& t, std::size_t tau, mode m, const param_overrides& ov = {}) {
    return make_params(t.size(), t.code_width(), tau, m, ov);
}

/// tau = n / b.
inline std::size_t tau_from_b(std::size_t n, std::size_t b) {
    if (b == 0) throw std::invalid_argument("b must be positive");
    return n / b;
}

} // namespace tpset
