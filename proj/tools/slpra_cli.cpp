// slpra: build, query and audit grammar-compressed strings.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slpra.hpp"

namespace {

using namespace slpra;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

class IoError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed: " + path);
}

Slp load(const std::string& path) { return parse_slp(read_file(path)); }

std::u32string decode(const std::string& bytes, bool utf8) { return utf8 ? decode_utf8(bytes) : decode_latin1(bytes); }

std::string encode(std::u32string_view text, bool utf8) { return utf8 ? encode_utf8(text) : encode_latin1(text); }

struct Common {
    std::string engine = "biased";
    int levels = 1;
    std::uint64_t seed = 1;
    bool utf8 = false;

    EngineOptions options() const { return {parse_engine_kind(engine), levels}; }
};

void add_engine_flags(CLI::App* cmd, Common& c)
{
    cmd->add_option("--engine", c.engine, "baseline | linear | biased")
        ->check(CLI::IsMember({"baseline", "linear", "biased"}));
    cmd->add_option("--levels", c.levels, "recursion depth of the biased engine")->check(CLI::Range(0, 2));
}

json cost_json(const AccessCost& c)
{
    return {{"rule_visits", c.rule_visits},
            {"predecessor_visits", c.predecessor_visits},
            {"predecessor_queries", c.predecessor_queries},
            {"path_switches", c.path_switches},
            {"fallbacks", c.fallbacks}};
}

int cmd_build(const std::string& input, const std::string& output, bool utf8)
{
    const std::u32string text = decode(read_file(input), utf8);
    const Slp slp = build_grammar(text);
    write_file(output, serialize_slp(slp));
    const double ratio = static_cast<double>(slp.length()) / static_cast<double>(slp.rule_count());
    std::fprintf(stderr, "rules %zu, length %llu, ratio %.3f\n", slp.rule_count(),
                 static_cast<unsigned long long>(slp.length()), ratio);
    return kOk;
}

int cmd_access(const std::string& path, Length i, const Common& c, bool with_cost)
{
    const Engine e(load(path), c.options());
    AccessCost cost;
    const char32_t ch = e.access(i, &cost);
    std::string out;
    append_utf8(out, ch);
    std::cout << out << '\n';
    if (with_cost) {
        json j = cost_json(cost);
        j["i"] = i;
        j["engine"] = to_string(e.kind());
        j["levels"] = e.levels();
        std::cout << j.dump() << '\n';
    }
    return kOk;
}

int cmd_extract(const std::string& path, Length i, Length j, const Common& c)
{
    const Engine e(load(path), c.options());
    const Extractor ex(e);
    const std::string bytes = encode(ex.extract(i, j), c.utf8);
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return kOk;
}

int cmd_search(const std::string& path, const std::string& pattern, std::size_t k, const Common& c)
{
    const Engine e(load(path), c.options());
    const Extractor ex(e);
    SearchStats stats;
    const std::vector<Length> ends = search(ex, decode(pattern, c.utf8), k, {}, &stats);
    std::string out;
    for (Length x : ends) out += std::to_string(x) + '\n';
    std::cout << out;
    std::fprintf(stderr, "%zu occurrences, %llu nodes, widest window %llu\n", ends.size(),
                 static_cast<unsigned long long>(stats.nodes), static_cast<unsigned long long>(stats.max_window));
    return ends.empty() ? kFailed : kOk;
}

json level_json(const WaLevelStats& s)
{
    return {{"forests", s.forests},
            {"nodes", s.nodes},
            {"paths", s.paths},
            {"light_nodes", s.light_nodes},
            {"max_light_height", s.max_light_height},
            {"top_nodes", s.top_nodes},
            {"top_leaves", s.top_leaves},
            {"bottom_trees", s.bottom_trees},
            {"bottom_nodes", s.bottom_nodes},
            {"branching_nodes", s.branching_nodes},
            {"light_height_ok", s.light_height_ok},
            {"top_leaves_ok", s.top_leaves_ok},
            {"branching_ok", s.branching_ok}};
}

int cmd_stats(const std::string& path, const Common& c, bool dump_ibst)
{
    EngineOptions opt = c.options();
    opt.kind = EngineKind::biased;
    const Engine e(load(path), opt);
    const Slp& slp = e.slp();
    const WaIndex& wa = *e.wa();

    if (dump_ibst) {
        // Trees of the heavy path holding the start symbol, one per side.
        for (Side side : {Side::left, Side::right}) {
            const PathIndex& paths = wa.heavy_paths(side);
            const std::string name = side == Side::left ? "left" : "right";
            const auto tree = paths.tree(paths.path_of(slp.root()));
            if (tree) std::cout << tree->to_dot(name);
            else std::cout << "digraph " << name << " {\n}\n";
        }
        return kOk;
    }

    json summary = {{"record", "summary"},
                    {"rules", slp.rule_count()},
                    {"length", slp.length()},
                    {"height", height(slp)},
                    {"h_roots", e.forest().roots.size()},
                    {"h_max_depth", e.forest().max_depth()},
                    {"levels", wa.levels()},
                    {"left_paths", wa.heavy_paths(Side::left).path_count()},
                    {"right_paths", wa.heavy_paths(Side::right).path_count()},
                    {"build_work", wa.build_work()},
                    {"ibst_nodes", wa.counters().ibst.nodes},
                    {"ibst_search_steps", wa.counters().ibst.search_steps}};
    std::cout << summary.dump() << '\n';

    // Light edges crossed per query: every position when short, a seeded sample otherwise.
    const Length n = slp.length();
    constexpr Length kSample = 10000;
    std::mt19937_64 rng(c.seed);
    std::vector<std::uint64_t> histogram;
    const Length queries = std::min(n, kSample);
    for (Length q = 0; q < queries; ++q) {
        const Length i = n <= kSample ? q : std::uniform_int_distribution<Length>(0, n - 1)(rng);
        const std::size_t d = e.access_with_trace(i).descents();
        if (histogram.size() <= d) histogram.resize(d + 1, 0);
        ++histogram[d];
    }
    std::cout << json{{"record", "light_edges"},
                      {"queries", queries},
                      {"exhaustive", n <= kSample},
                      {"bound", light_edge_bound(n)},
                      {"histogram", histogram}}
                     .dump()
              << '\n';

    const auto& levels = wa.stats().levels;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        json j = level_json(levels[l]);
        j["record"] = "level";
        j["depth"] = l;
        std::cout << j.dump() << '\n';
    }
    return kOk;
}

int cmd_verify(const std::string& path, const Common& c, Length oracle_cap)
{
    VerifyOptions opt;
    opt.oracle_cap = oracle_cap;
    opt.seed = c.seed;
    opt.levels = c.levels;
    const auto results = verify(load(path), opt);
    bool ok = true;
    for (const SuiteResult& r : results) {
        std::cout << json{{"suite", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}}.dump() << '\n';
        std::fprintf(stderr, "%-12s %s%s%s\n", r.name.c_str(), std::string(to_string(r.status)).c_str(),
                     r.detail.empty() ? "" : "  ", r.detail.c_str());
        ok = ok && r.status != SuiteStatus::fail;
    }
    return ok ? kOk : kFailed;
}

struct BenchTotals {
    std::uint64_t visits = 0;
    std::uint64_t max_visits = 0;
    std::uint64_t rule_visits = 0;
    std::uint64_t switches = 0;

    void add(const AccessCost& c)
    {
        visits += c.predecessor_visits;
        max_visits = std::max(max_visits, c.predecessor_visits);
        rule_visits += c.rule_visits;
        switches += c.path_switches;
    }
    void merge(const BenchTotals& o)
    {
        visits += o.visits;
        max_visits = std::max(max_visits, o.max_visits);
        rule_visits += o.rule_visits;
        switches += o.switches;
    }
};

std::string fixed(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

int cmd_bench(const std::string& path, const Common& c, bool engine_given, std::size_t queries, unsigned threads,
              bool timing)
{
    using clock = std::chrono::steady_clock;
    const Slp slp = load(path);
    const Length n = slp.length();
    std::mt19937_64 rng(c.seed);
    std::vector<Length> positions(queries);
    for (auto& p : positions) p = std::uniform_int_distribution<Length>(0, n - 1)(rng);
    std::vector<std::pair<Length, Length>> spans(std::max<std::size_t>(1, queries / 10));
    for (auto& [i, j] : spans) {
        i = std::uniform_int_distribution<Length>(0, n - 1)(rng);
        j = std::min(n, i + 1024);
    }

    std::vector<EngineOptions> configs;
    if (engine_given) {
        configs.push_back(c.options());
    } else {
        configs = {{EngineKind::baseline, 0}, {EngineKind::linear, 0}, {EngineKind::biased, 0},
                   {EngineKind::biased, 1}, {EngineKind::biased, 2}};
    }

    const double bound = 4.0 * (2.0 + std::log2(static_cast<double>(n)));
    std::cout << "engine,levels,build_ms,build_work,queries,pred_visits_mean,pred_visits_max,visit_bound,"
                 "rule_visits_mean,path_switches_mean,decode_chars,decode_mchars_per_s\n";
    for (const EngineOptions& opt : configs) {
        const auto t0 = clock::now();
        const Engine e(slp, opt);
        const auto t1 = clock::now();

        const unsigned workers = std::max(1u, threads);
        std::vector<BenchTotals> part(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t q = w; q < positions.size(); q += workers) part[w].add(e.query_cost(positions[q]));
            });
        }
        for (auto& t : pool) t.join();
        BenchTotals total;
        for (const auto& p : part) total.merge(p);

        const Extractor ex(e);
        std::uint64_t decoded = 0;
        const auto t2 = clock::now();
        for (const auto& [i, j] : spans) decoded += ex.extract(i, j).size();
        const auto t3 = clock::now();

        const double build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double decode_s = std::chrono::duration<double>(t3 - t2).count();
        const double q = static_cast<double>(std::max<std::size_t>(1, queries));
        std::cout << to_string(opt.kind) << ',' << (opt.kind == EngineKind::biased ? std::to_string(opt.levels) : "")
                  << ',' << (timing ? fixed(build_ms) : "") << ',' << e.build_work() << ',' << queries << ','
                  << fixed(static_cast<double>(total.visits) / q) << ',' << total.max_visits << ',' << fixed(bound)
                  << ',' << fixed(static_cast<double>(total.rule_visits) / q) << ','
                  << fixed(static_cast<double>(total.switches) / q) << ',' << decoded << ','
                  << (timing && decode_s > 0 ? fixed(static_cast<double>(decoded) / decode_s / 1e6) : "") << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random access, substring extraction and approximate matching on grammar-compressed strings"};
    app.require_subcommand(1);
    Common c;

    std::string input, output, slp_path, pattern;
    Length i = 0, j = 0;
    std::size_t k = 0, queries = 10000;
    unsigned threads = 1;
    bool with_cost = false, dump_ibst = false, no_timing = false;
    Length oracle_cap = kDefaultOracleCap;

    auto* build = app.add_subcommand("build", "compress a file into an SLPv1 grammar");
    build->add_option("input", input, "input file")->required();
    build->add_option("output", output, "grammar file to write")->required();
    build->add_flag("--utf8", c.utf8, "decode the input as UTF-8 instead of bytes");

    auto* access = app.add_subcommand("access", "print the character at a 0-based position");
    access->add_option("slp", slp_path)->required();
    access->add_option("i", i)->required();
    access->add_flag("--cost", with_cost, "also print a JSON cost record");
    add_engine_flags(access, c);

    auto* extract = app.add_subcommand("extract", "write S[i, j) to standard output");
    extract->add_option("slp", slp_path)->required();
    extract->add_option("i", i)->required();
    extract->add_option("j", j)->required();
    extract->add_flag("--utf8", c.utf8, "encode as UTF-8 instead of bytes");
    add_engine_flags(extract, c);

    auto* search_cmd = app.add_subcommand("search", "end positions of approximate occurrences");
    search_cmd->add_option("slp", slp_path)->required();
    search_cmd->add_option("pattern", pattern)->required();
    search_cmd->add_option("--k", k, "maximum edit distance")->required();
    search_cmd->add_flag("--utf8", c.utf8, "decode the pattern as UTF-8 instead of bytes");
    add_engine_flags(search_cmd, c);

    auto* stats = app.add_subcommand("stats", "structure statistics as JSON lines");
    stats->add_option("slp", slp_path)->required();
    stats->add_flag("--dump-ibst", dump_ibst, "print the start symbol's heavy path trees as DOT");
    stats->add_option("--levels", c.levels)->check(CLI::Range(0, 2));
    stats->add_option("--seed", c.seed);

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
    verify_cmd->add_option("slp", slp_path)->required();
    verify_cmd->add_option("--oracle-cap", oracle_cap, "skip the oracle suite above this length");
    verify_cmd->add_option("--seed", c.seed);
    verify_cmd->add_option("--levels", c.levels)->check(CLI::Range(0, 2));

    auto* bench = app.add_subcommand("bench", "query cost and throughput as CSV");
    bench->add_option("slp", slp_path)->required();
    bench->add_option("--seed", c.seed);
    bench->add_option("--queries", queries);
    bench->add_option("--threads", threads);
    bench->add_flag("--no-timing", no_timing, "leave timing columns empty");
    add_engine_flags(bench, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*build) return cmd_build(input, output, c.utf8);
        if (*access) return cmd_access(slp_path, i, c, with_cost);
        if (*extract) return cmd_extract(slp_path, i, j, c);
        if (*search_cmd) return cmd_search(slp_path, pattern, k, c);
        if (*stats) return cmd_stats(slp_path, c, dump_ibst);
        if (*verify_cmd) return cmd_verify(slp_path, c, oracle_cap);
        if (*bench) return cmd_bench(slp_path, c, bench->count("--engine") > 0, queries, threads, !no_timing);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
