#pragma once

// Check levels behind `tpset verify`.

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tpset/tpset.hpp"

namespace tpset::verify {

struct instance {
    std::string name;
    Text text;
    std::size_t tau;
    param_overrides ov;
};

struct outcome {
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void fail(const std::string& s) {
        if (failures.size() < 20) failures.push_back(s);
        else if (failures.size() == 20) failures.push_back("...");
    }
    bool ok() const { return failures.empty(); }
};

inline std::string name_of(const instance& in) {
    std::ostringstream os;
    os << in.name << " n=" << in.text.size() << " tau=" << in.tau;
    return os.str();
}

inline std::vector<instance> default_corpus() {
    std::vector<instance> out;
    std::uint64_t seed = 1;
    for (std::size_t n : {256, 700, 1024})
        for (std::uint32_t sigma : {2u, 4u, 256u})
            for (std::size_t tau : {8, 16, 32, 64})
                out.push_back({"random", Text(gen::random(n, sigma, seed++)), tau, {}});
    for (std::size_t tau : {8, 32, 64}) {
        out.push_back({"fibonacci", gen::as_letters(gen::fibonacci(987)), tau, {}});
        out.push_back({"unary", Text(std::vector<std::uint32_t>(600, 'a')), tau, {}});
        out.push_back({"runs", Text(gen::runs(800, 3, seed++)), tau, {}});
        out.push_back({"periodic", Text(gen::periodic(700, 3, 5, seed++)), tau, {}});
    }
    return out;
}

inline ParamEnv params(const instance& in) { return make_params(in.text, in.tau, mode::desk, in.ov); }

inline ParamEnv five_phases(const Text& t) {
    ParamEnv p;
    p.n = t.size();
    p.code_width = t.code_width();
    p.lambda3 = reference_lambda3(t.size(), t.code_width());
    p.phase_count = 5;
    p.tau = std::size_t{16} * p.lambda3 << 5;
    p.b = std::max<std::size_t>(1, p.n / p.tau);
    return p;
}

inline void expect_report(outcome& o, const instance& in, const std::string& what, const oracle::PropertyReport& r) {
    o.checks += r.checked;
    if (!r.holds) o.fail(name_of(in) + " " + what + ": " + r.to_text());
}

inline r_sequence letters_of(const Text& t, const ParamEnv& p, std::vector<std::size_t>* sprime = nullptr) {
    r_sequence R;
    collect_sink sink;
    front_end fe(t, p, sink, &R);
    run_pipeline(t, p, fe);
    R.assign_ids();
    if (sprime) *sprime = sink.out;
    return R;
}

// streaming phases against the direct rule, local sparsity, and per-phase properties
inline void phases(const instance& in, outcome& o) {
    const Text& t = in.text;
    ParamEnv p = five_phases(t);
    std::vector<std::vector<std::size_t>> taps;
    refine_options ro;
    ro.taps = &taps;
    refine_positions(t, p, ro);
    auto direct = oracle::direct_refine_all(t, 5);
    for (unsigned k = 1; k <= 5; ++k) {
        const auto& s = taps[k - 1];
        ++o.checks;
        if (s != direct[k]) o.fail(name_of(in) + " phase " + std::to_string(k) + " differs from the direct rule");
        std::size_t w = std::size_t{1} << k, cnt = 0;
        std::vector<char> mem(t.size(), 0);
        for (auto x : s) mem[x] = 1;
        for (std::size_t i = 0; i < t.size(); ++i) {
            cnt += mem[i];
            if (i >= w) cnt -= mem[i - w];
            if (cnt > 64) o.fail(name_of(in) + " phase " + std::to_string(k) + " too dense at " + std::to_string(i));
        }
        std::size_t tk = std::size_t{8} << k;
        expect_report(o, in, "phase " + std::to_string(k) + " (a)", oracle::check_property_a(t, s, tk));
        expect_report(o, in, "phase " + std::to_string(k) + " (b)", oracle::check_property_b(t, s, tk));
        expect_report(o, in, "phase " + std::to_string(k) + " (c)", oracle::check_property_c(t, s, tk * p.lambda3));
    }
}

inline void stage1(const instance& in, outcome& o) {
    const Text& t = in.text;
    ParamEnv p = params(in);
    std::vector<std::size_t> sp;
    letters_of(t, p, &sp);
    auto sk = refine_positions(t, p);
    ++o.checks;
    if (sp != oracle::direct_stage1(t, sk, in.tau)) o.fail(name_of(in) + " S' differs from the direct definition");
    std::size_t t34 = 3 * in.tau / 4;
    expect_report(o, in, "S' (a)", oracle::check_property_a(t, sp, t34));
    expect_report(o, in, "S' (b)", oracle::check_property_b(t, sp, t34));
    expect_report(o, in, "S' (c)", oracle::check_property_c(t, sp, in.tau));
    expect_report(o, in, "S' converse", oracle::check_c_converse(t, sp, in.tau, t34));
}

inline void letters(const instance& in, outcome& o) {
    const Text& t = in.text;
    ParamEnv p = params(in);
    std::vector<std::size_t> sp;
    r_sequence R = letters_of(t, p, &sp);
    auto shape = make_letter_shape(p);
    auto direct = oracle::direct_letters(t, sp, shape.tau, shape.ell, shape.field);
    ++o.checks;
    if (direct.size() != R.size()) {
        o.fail(name_of(in) + " letter count differs");
        return;
    }
    for (std::size_t i = 0; i < R.size(); ++i)
        if (!(direct[i] == R.letters[i])) {
            o.fail(name_of(in) + " letter " + std::to_string(i) + " differs from the direct construction");
            break;
        }
    std::size_t reach = in.tau >> 5;
    for (std::size_t i = 0; i < R.size(); ++i)
        for (std::size_t k = i + 1; k < R.size() && R.origin[k] - R.origin[i] <= reach; ++k) {
            ++o.checks;
            if (R.ids[i] == R.ids[k]) o.fail(name_of(in) + " equal close letters at " + std::to_string(R.origin[i]));
        }
}

inline void recompression(const instance& in, outcome& o) {
    for (unsigned l4 : {8u, 10u}) {
        instance x = in;
        x.ov.lambda4 = l4;
        ParamEnv p = params(x);
        r_sequence R = letters_of(x.text, p);
        recompress_options ro;
        ro.force_steps = 3;
        recompress_stats st;
        recompress_loop(R, p, ro, &st);
        for (const auto& s : st.steps) {
            ++o.checks;
            if (4 * s.eligible_after > 3 * s.eligible_before)
                o.fail(name_of(in) + " step at j=" + std::to_string(s.j) + " shrank too little");
        }
        for (auto [j, it] : st.iterations)
            if (it > 3) o.fail(name_of(in) + " j=" + std::to_string(j) + " needed " + std::to_string(it) + " steps");
        if (st.final_length * in.tau > (std::size_t{1} << 16) * in.text.size()) o.fail(name_of(in) + " final |R| too large");
    }
}

inline void final_set(const instance& in, outcome& o) {
    const Text& t = in.text;
    ParamEnv p = params(in);
    for (unsigned forced : {0u, 3u}) {
        partition_options po;
        po.recompress.force_steps = forced;
        auto s = build_partition(t, p, po).sstar;
        po.replay = true;
        ++o.checks;
        if (build_partition(t, p, po).sstar != s) o.fail(name_of(in) + " replay differs");
        expect_report(o, in, "S* (a)", oracle::check_property_a(t, s, in.tau));
        expect_report(o, in, "S* (b)", oracle::check_property_b(t, s, in.tau));
        expect_report(o, in, "S* (c)", oracle::check_property_c(t, s, in.tau));
        expect_report(o, in, "S* converse", oracle::check_c_converse(t, s, in.tau, in.tau));
    }
}

inline void lce(const instance& in, outcome& o) {
    const Text& t = in.text;
    std::size_t n = t.size();
    lce_index idx(t, build_partition(t, params(in)).sstar, in.tau);
    auto one = [&](std::size_t p, std::size_t q) {
        lce_query_stats st;
        std::size_t got = idx.query(p, q, &st);
        ++o.checks;
        if (got != oracle::naive_lce(t, p, q) || st.depth > 1 || st.symbol_reads + st.walk_steps > 32 * (in.tau + 1))
            o.fail(name_of(in) + " query " + std::to_string(p) + " " + std::to_string(q));
    };
    if (n <= 1024) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) one(p, q);
    } else {
        lcg64 g(n);
        for (int k = 0; k < 100000; ++k) one(g.below(static_cast<std::uint32_t>(n)), g.below(static_cast<std::uint32_t>(n)));
    }
}

inline void sst(const instance& in, outcome& o) {
    const Text& t = in.text;
    std::size_t n = t.size();
    text_range r(t);
    auto s = build_partition(t, params(in)).sstar;
    lce_index idx(t, s, in.tau);
    ++o.checks;
    if (oracle::canonical_form(r, idx.tree()) != oracle::canonical_trie(r, s)) o.fail(name_of(in) + " core tree");
    lcg64 g(n + in.tau);
    std::set<std::size_t> pick;
    std::size_t b = std::min(n, std::max<std::size_t>(1, n / in.tau));
    while (pick.size() < b) pick.insert(g.below(static_cast<std::uint32_t>(n)));
    std::vector<std::size_t> suf(pick.begin(), pick.end());
    user_sst_options uo;
    uo.verify = true;
    ++o.checks;
    if (oracle::canonical_form(r, build_user_sst(t, idx, suf, uo)) != oracle::canonical_trie(r, suf))
        o.fail(name_of(in) + " user tree");
}

inline const std::map<std::string, std::function<void(const instance&, outcome&)>>& levels() {
    static const std::map<std::string, std::function<void(const instance&, outcome&)>> m{
        {"phases", phases}, {"stage1", stage1}, {"letters", letters}, {"recompression", recompression},
        {"final", final_set}, {"lce", lce}, {"sst", sst}};
    return m;
}

} // namespace tpset::verify
