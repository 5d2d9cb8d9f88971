#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slpra/access.hpp"
#include "slpra/ibst.hpp"
#include "slpra/slp.hpp"
#include "slpra/substring.hpp"

namespace slpra {

enum class SuiteStatus : std::uint8_t { pass, fail, skip };

inline std::string_view to_string(SuiteStatus s)
{
    switch (s) {
    case SuiteStatus::pass: return "pass";
    case SuiteStatus::fail: return "fail";
    case SuiteStatus::skip: return "skip";
    }
    return "?";
}

struct SuiteResult {
    std::string name;
    SuiteStatus status = SuiteStatus::pass;
    std::string detail;
};

struct VerifyOptions {
    Length oracle_cap = kDefaultOracleCap;
    std::uint64_t seed = 1;
    std::size_t samples = 2000;
    int levels = 1;
};

/// floor(log2(universe / width)) + 1, the depth allowed for a node whose
/// interval has the given width.
inline std::uint32_t ibst_depth_bound(Length universe, Length width)
{
    std::uint32_t j = 0;
    while (j + 1 < 64 && width <= (universe >> (j + 1))) ++j;
    return j + 1;
}

/// Index of the first node violating the depth bound, or -1.
template <class Tree>
inline std::int64_t ibst_depth_violation(const Tree& t)
{
    const auto b = t.boundaries();
    for (std::size_t i = 0; i < t.interval_count(); ++i) {
        if (t.depth(i) > ibst_depth_bound(t.universe(), b[i + 1] - b[i])) return static_cast<std::int64_t>(i);
    }
    return -1;
}

inline std::uint32_t light_edge_bound(Length n) { return static_cast<std::uint32_t>(std::bit_width(n) - 1) + 1; }

/// Runs the invariant suites. After a failed "sizes" suite every other suite
/// is skipped, since nothing else is meaningful on inconsistent sizes.
inline std::vector<SuiteResult> verify(const Slp& slp, const VerifyOptions& opt = {})
{
    std::vector<SuiteResult> out;
    const char* const later[] = {"oracle", "light-edges", "ibst-depth", "light-tree", "engines", "substring"};

    SuiteResult sizes{"sizes", SuiteStatus::pass, ""};
    try {
        const std::vector<Length> fresh = compute_sizes(slp.rules());
        for (RuleId v = 0; v < slp.rule_count(); ++v) {
            if (fresh[v] != slp.size(v)) {
                sizes.status = SuiteStatus::fail;
                sizes.detail = "size of rule " + std::to_string(v) + " is " + std::to_string(slp.size(v)) +
                               ", expected " + std::to_string(fresh[v]);
                break;
            }
        }
    } catch (const Error& e) {
        sizes.status = SuiteStatus::fail;
        sizes.detail = e.what();
    }
    out.push_back(sizes);
    if (sizes.status == SuiteStatus::fail) {
        for (const char* name : later) out.push_back({name, SuiteStatus::skip, "sizes inconsistent"});
        return out;
    }

    const Length n = slp.length();
    std::mt19937_64 rng(opt.seed);
    std::vector<Length> sample;
    sample.push_back(0);
    sample.push_back(n - 1);
    for (std::size_t s = 0; s < opt.samples; ++s) sample.push_back(std::uniform_int_distribution<Length>(0, n - 1)(rng));

    Engine baseline(slp, {EngineKind::baseline, opt.levels});
    Engine linear(slp, {EngineKind::linear, opt.levels});
    Engine biased(slp, {EngineKind::biased, opt.levels});
    const Engine* engines[] = {&baseline, &linear, &biased};

    SuiteResult oracle{"oracle", SuiteStatus::pass, ""};
    if (n > opt.oracle_cap) {
        oracle.status = SuiteStatus::skip;
        oracle.detail = "length " + std::to_string(n) + " exceeds oracle cap " + std::to_string(opt.oracle_cap);
    } else {
        const std::u32string text = expand(slp, opt.oracle_cap);
        for (const Engine* e : engines) {
            for (Length i = 0; i < n && oracle.status == SuiteStatus::pass; ++i) {
                if (e->access(i) != text[i]) {
                    oracle.status = SuiteStatus::fail;
                    oracle.detail = std::string(to_string(e->kind())) + " differs at " + std::to_string(i);
                }
            }
        }
    }
    out.push_back(oracle);

    SuiteResult edges{"light-edges", SuiteStatus::pass, ""};
    const std::uint32_t bound = light_edge_bound(n);
    for (Length i : sample) {
        const Trace t = biased.access_with_trace(i);
        bool ok = t.descents() <= bound;
        for (const TraceStep& s : t.steps) {
            if (s.kind != StepCase::hit && (s.rebased < 1 || s.rebased > slp.size(s.child))) ok = false;
        }
        if (!ok) {
            edges.status = SuiteStatus::fail;
            edges.detail = "position " + std::to_string(i) + " crosses " + std::to_string(t.descents()) +
                           " light edges (bound " + std::to_string(bound) + ")";
            break;
        }
    }
    out.push_back(edges);

    SuiteResult depth{"ibst-depth", SuiteStatus::pass, ""};
    std::uint64_t trees = 0;
    biased.wa()->for_each_tree([&](const IbstView& t) {
        ++trees;
        if (depth.status == SuiteStatus::pass && ibst_depth_violation(t) >= 0) {
            depth.status = SuiteStatus::fail;
            depth.detail = "node deeper than floor(log2(U/x)) + 1";
        }
    });
    if (depth.status == SuiteStatus::pass) depth.detail = std::to_string(trees) + " trees";
    out.push_back(depth);

    SuiteResult light{"light-tree", SuiteStatus::pass, ""};
    const WaStats& ws = biased.wa()->stats();
    for (std::size_t lvl = 0; lvl < ws.levels.size(); ++lvl) {
        const WaLevelStats& s = ws.levels[lvl];
        std::string what;
        if (!s.light_height_ok) what = "L height";
        else if (!s.top_leaves_ok) what = "top tree leaves";
        else if (!s.branching_ok) what = "branching representation";
        if (!what.empty()) {
            light.status = SuiteStatus::fail;
            light.detail = what + " bound violated at level " + std::to_string(lvl);
            break;
        }
    }
    out.push_back(light);

    SuiteResult cross{"engines", SuiteStatus::pass, ""};
    for (Length i : sample) {
        const char32_t a = baseline.access(i);
        if (linear.access(i) != a || biased.access(i) != a) {
            cross.status = SuiteStatus::fail;
            cross.detail = "engines disagree at " + std::to_string(i);
            break;
        }
    }
    out.push_back(cross);

    SuiteResult sub{"substring", SuiteStatus::pass, ""};
    const Extractor ex(biased);
    for (std::size_t s = 0; s < std::min<std::size_t>(opt.samples, 500); ++s) {
        Length i = std::uniform_int_distribution<Length>(0, n - 1)(rng);
        const Length len = std::uniform_int_distribution<Length>(0, std::min<Length>(n - i, 256))(rng);
        const std::u32string got = ex.extract(i, i + len);
        bool ok = got.size() == len;
        for (Length q = 0; ok && q < len; ++q) ok = got[q] == baseline.access(i + q);
        if (!ok) {
            sub.status = SuiteStatus::fail;
            sub.detail = "extract(" + std::to_string(i) + ", " + std::to_string(i + len) + ") differs";
            break;
        }
    }
    out.push_back(sub);
    return out;
}

}  // namespace slpra
