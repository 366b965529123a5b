#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpset/tpset.hpp"
#include "verify.hpp"

using namespace tpset;
using json = nlohmann::ordered_json;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct text_opts {
    std::string input;
    std::string format = "bytes";
    std::size_t tau = 0;
    std::size_t b = 0;
    std::string mode_name = "desk";
    std::optional<unsigned> lambda3, lambda4;
    std::string stats;
};

void add_text_opts(CLI::App* app, text_opts& o, bool input_required = true) {
    auto* in = app->add_option("--input", o.input, "text file");
    if (input_required) in->required();
    app->add_option("--format", o.format, "bytes or u32le")->check(CLI::IsMember({"bytes", "u32le"}));
    app->add_option("--tau", o.tau, "tau");
    app->add_option("--b", o.b, "b; tau = n / b");
    app->add_option("--mode", o.mode_name, "reference or desk")->check(CLI::IsMember({"reference", "desk"}));
    app->add_option("--lambda3", o.lambda3, "desk mode override");
    app->add_option("--lambda4", o.lambda4, "desk mode override");
    app->add_option("--stats", o.stats, "write build statistics (JSON)");
}

Text load(const text_opts& o) {
    return load_text_file(o.input, o.format == "u32le" ? text_format::u32le : text_format::bytes);
}

ParamEnv params_for(const Text& t, const text_opts& o) {
    if ((o.tau == 0) == (o.b == 0)) throw usage_error("give exactly one of --tau and --b");
    std::size_t tau = o.tau ? o.tau : tau_from_b(t.size(), o.b);
    param_overrides ov;
    ov.lambda3 = o.lambda3;
    ov.lambda4 = o.lambda4;
    try {
        return make_params(t, tau, o.mode_name == "reference" ? mode::reference : mode::desk, ov);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
}

json stats_json(const ParamEnv& p, const partition_stats& st) {
    json j;
    j["n"] = p.n;
    j["tau"] = p.tau;
    j["b"] = p.b;
    j["mode"] = p.run_mode == mode::desk ? "desk" : "reference";
    j["lambda3"] = p.lambda3;
    j["lambda4"] = p.lambda4;
    j["phase_count"] = p.phase_count;
    j["sizes"] = {{"s_k", st.s_size},
                  {"s_prime", st.sprime_size},
                  {"r_initial", st.recompress.initial_length},
                  {"r_final", st.recompress.final_length},
                  {"s_star", st.sstar_size}};
    json it = json::array();
    for (auto [jj, steps] : st.recompress.iterations) it.push_back({{"j", jj}, {"steps", steps}});
    j["recompression"] = it;
    j["provider_queries"] = st.refine.provider_queries;
    j["replayed"] = st.replayed;
    j["seconds"] = {{"refine_and_stage1", st.refine_front_seconds},
                    {"recompression", st.recompress_seconds},
                    {"replay", st.replay_seconds}};
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw usage_error("cannot write " + path);
    f << j.dump(2) << '\n';
}

std::vector<std::size_t> read_positions(std::istream& in) {
    std::vector<std::size_t> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t x;
        std::string rest;
        if (!(ls >> x) || (ls >> rest)) throw usage_error("malformed position line: " + line);
        v.push_back(x);
    }
    return v;
}

struct built {
    Text text;
    ParamEnv params;
    partition_stats stats;
    std::vector<std::size_t> sstar;
};

built build(const text_opts& o) {
    built b;
    b.text = load(o);
    b.params = params_for(b.text, o);
    b.sstar = build_partition(b.text, b.params, {}, &b.stats).sstar;
    return b;
}

int cmd_build_partition(const text_opts& o, const std::string& out) {
    auto b = build(o);
    std::ostringstream os;
    for (auto x : b.sstar) os << x << '\n';
    if (out.empty() || out == "-") {
        std::cout << os.str();
    } else {
        std::ofstream f(out);
        if (!f) throw usage_error("cannot write " + out);
        f << os.str();
    }
    if (!o.stats.empty()) write_json(o.stats, stats_json(b.params, b.stats));
    return 0;
}

int cmd_lce(const text_opts& o, const std::string& queries) {
    built b;
    lce_index idx;
    if (Text t = load(o); t.size() < 8) {
        // too short for a partitioning set; every position with tau = 1 still answers exactly
        b.text = std::move(t);
        std::vector<std::size_t> all(b.text.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        idx = lce_index(b.text, all, 1);
    } else {
        b = build(o);
        idx = lce_index(b.text, b.sstar, b.params.tau);
    }
    std::ifstream qf;
    if (!queries.empty()) {
        qf.open(queries);
        if (!qf) throw usage_error("cannot read " + queries);
    }
    std::istream& in = queries.empty() ? std::cin : qf;
    std::size_t count = 0, max_reads = 0, total_reads = 0, jumps = 0, fallbacks = 0;
    std::string line;
    std::ostringstream out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t p, q;
        std::string rest;
        if (!(ls >> p >> q) || (ls >> rest)) throw usage_error("malformed query line: " + line);
        if (p >= b.text.size() || q >= b.text.size()) throw usage_error("query position outside the text: " + line);
        lce_query_stats st;
        out << idx.query(p, q, &st) << '\n';
        ++count;
        std::size_t cost = st.symbol_reads + st.walk_steps;
        total_reads += cost;
        max_reads = std::max(max_reads, cost);
        jumps += st.jumped;
        fallbacks += st.fallback;
    }
    std::cout << out.str();
    if (!o.stats.empty()) {
        json j = b.params.n ? stats_json(b.params, b.stats) : json::object();
        j["queries"] = {{"count", count},
                        {"max_reads", max_reads},
                        {"total_reads", total_reads},
                        {"jumps", jumps},
                        {"fallbacks", fallbacks}};
        write_json(o.stats, j);
    }
    return 0;
}

int cmd_sst(const text_opts& o, const std::string& suffixes, const std::string& out) {
    auto b = build(o);
    lce_index idx(b.text, b.sstar, b.params.tau);
    std::string tree;
    user_sst_stats us;
    if (suffixes.empty()) {
        tree = idx.tree().serialize();
    } else {
        std::ifstream f(suffixes);
        if (!f) throw usage_error("cannot read " + suffixes);
        auto pos = read_positions(f);
        try {
            tree = build_user_sst(b.text, idx, pos, {}, &us).serialize();
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
    }
    if (out.empty() || out == "-") {
        std::cout << tree;
    } else {
        std::ofstream f(out);
        if (!f) throw usage_error("cannot write " + out);
        f << tree;
    }
    if (!o.stats.empty()) {
        json j = stats_json(b.params, b.stats);
        j["suffixes"] = {{"anchored", us.anchored}, {"periodic", us.periodic}, {"no_anchor", us.no_anchor}};
        write_json(o.stats, j);
    }
    return 0;
}

int cmd_verify(const text_opts& o, const std::string& level) {
    const auto& lv = verify::levels();
    auto it = lv.find(level);
    if (it == lv.end()) throw usage_error("unknown verify level: " + level);
    std::vector<verify::instance> corpus;
    if (o.input.empty()) {
        corpus = verify::default_corpus();
    } else {
        Text t = load(o);
        ParamEnv p = params_for(t, o);
        param_overrides ov;
        ov.lambda3 = o.lambda3;
        ov.lambda4 = o.lambda4;
        corpus.push_back({o.input, std::move(t), p.tau, ov});
    }
    verify::outcome res;
    for (const auto& in : corpus) {
        ++res.instances;
        try {
            it->second(in, res);
        } catch (const std::exception& e) {
            res.fail(verify::name_of(in) + " threw: " + e.what());
        }
    }
    for (const auto& f : res.failures) std::cout << "FAIL " << f << '\n';
    std::cout << level << ": " << (res.ok() ? "ok" : "failed") << " (" << res.instances << " instances, " << res.checks
              << " checks)\n";
    return res.ok() ? 0 : 1;
}

int cmd_gen(const std::string& kind, std::size_t n, std::uint32_t sigma, std::uint64_t seed, std::size_t period,
            const std::string& format, const std::string& out) {
    corpus_kind k;
    try {
        k = parse_corpus_kind(kind);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    if (sigma == 0) throw usage_error("sigma must be positive");
    auto v = gen::make(k, n, sigma, seed, period);
    // small alphabets are written as letters from 'a'
    if (k == corpus_kind::fibonacci || sigma <= 26)
        for (auto& c : v) c += 'a';
    std::string bytes;
    if (format == "bytes") {
        for (auto c : v) {
            if (c > 255) throw usage_error("sigma too large for --format bytes");
            bytes.push_back(static_cast<char>(c));
        }
    } else {
        for (auto c : v)
            for (int s = 0; s < 32; s += 8) bytes.push_back(static_cast<char>((c >> s) & 0xff));
    }
    if (out.empty() || out == "-") {
        std::cout << bytes;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw usage_error("cannot write " + out);
        f << bytes;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tau-partitioning sets, LCE index and sparse suffix trees"};
    app.require_subcommand(1);

    text_opts bp_o, lce_o, sst_o, ver_o;
    std::string bp_out, lce_queries, sst_suffixes, sst_out, level;

    auto* bp = app.add_subcommand("build-partition", "build S* and write its positions");
    add_text_opts(bp, bp_o);
    bp->add_option("--out", bp_out, "positions file (default stdout)");

    auto* lc = app.add_subcommand("lce", "answer \"p q\" queries, one per line");
    add_text_opts(lc, lce_o);
    lc->add_option("--queries", lce_queries, "query file (default stdin)");

    auto* ss = app.add_subcommand("sst", "sparse suffix tree over S* or over --suffixes");
    add_text_opts(ss, sst_o);
    ss->add_option("--suffixes", sst_suffixes, "newline-delimited positions");
    ss->add_option("--out", sst_out, "tree file (default stdout)");

    auto* ve = app.add_subcommand("verify", "run a check level over the default corpus or --input");
    add_text_opts(ve, ver_o, false);
    ve->add_option("--level", level, "phases, stage1, letters, recompression, final, lce or sst")->required();

    std::string kind = "random", gformat = "bytes", gout;
    std::size_t gn = 1024, period = 5;
    std::uint32_t sigma = 4;
    std::uint64_t seed = 1;
    auto* ge = app.add_subcommand("gen", "write a deterministic test text");
    ge->add_option("--kind", kind, "random, periodic, fibonacci or runs");
    ge->add_option("--n", gn, "length");
    ge->add_option("--sigma", sigma, "alphabet size");
    ge->add_option("--seed", seed, "generator seed");
    ge->add_option("--period", period, "period of --kind periodic");
    ge->add_option("--format", gformat, "bytes or u32le")->check(CLI::IsMember({"bytes", "u32le"}));
    ge->add_option("--out", gout, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*bp) return cmd_build_partition(bp_o, bp_out);
        if (*lc) return cmd_lce(lce_o, lce_queries);
        if (*ss) return cmd_sst(sst_o, sst_suffixes, sst_out);
        if (*ve) return cmd_verify(ver_o, level);
        if (*ge) return cmd_gen(kind, gn, sigma, seed, period, gformat, gout);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
