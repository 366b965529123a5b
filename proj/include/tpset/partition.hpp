#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tpset/refine.hpp"
#include "tpset/sparsify.hpp"
#include "tpset/text.hpp"

namespace tpset {

struct partition_options {
    refine_options refine;
    recompress_options recompress;
    /// Rebuild S* by replaying the pipeline even when S' origins are stored (desk mode).
    bool replay = false;
    /// Keep R after the build (for inspection).
    r_sequence* keep_r = nullptr;
};

struct partition_stats {
    refine_stats refine;
    front_stats front;
    recompress_stats recompress;
    std::size_t s_size = 0;      // |S_K|
    std::size_t sprime_size = 0; // |S'|
    std::size_t sstar_size = 0;
    bool replayed = false;
    double refine_front_seconds = 0;
    double recompress_seconds = 0;
    double replay_seconds = 0;
};

struct partition_result {
    std::vector<std::size_t> sstar;
    std::vector<char> keep; // mask over S'
};

/// Builds S* for the text: refinement phases, stage 1, letters, recompression, and the final selection.
inline partition_result build_partition(const Text& t, const ParamEnv& p, const partition_options& opt = {},
                                        partition_stats* stats = nullptr) {
    using clock = std::chrono::steady_clock;
    partition_stats local;
    partition_stats& st = stats ? *stats : local;
    st = {};
    if (t.size() != p.n) throw std::invalid_argument("parameters were made for a different text length");

    auto t0 = clock::now();
    r_sequence R;
    collect_sink sprime;
    front_end fe(t, p, sprime, &R);
    run_pipeline(t, p, fe, opt.refine, &st.refine);
    st.front = fe.stats();
    st.s_size = st.front.inputs;
    st.sprime_size = sprime.out.size();
    if (R.size() != sprime.out.size()) throw invariant_error("letter count differs from |S'|");
    R.assign_ids();
    auto t1 = clock::now();

    partition_result res;
    res.keep = recompress_loop(R, p, opt.recompress, &st.recompress);
    auto t2 = clock::now();

    if (opt.replay || p.run_mode == mode::reference) {
        res.sstar = replay_to_sstar(t, p, res.keep, opt.refine);
        st.replayed = true;
    } else {
        res.sstar = R.origin;
    }
    auto t3 = clock::now();
    st.sstar_size = res.sstar.size();
    st.refine_front_seconds = std::chrono::duration<double>(t1 - t0).count();
    st.recompress_seconds = std::chrono::duration<double>(t2 - t1).count();
    st.replay_seconds = std::chrono::duration<double>(t3 - t2).count();
    if (opt.keep_r) *opt.keep_r = std::move(R);
    return res;
}

} // namespace tpset
