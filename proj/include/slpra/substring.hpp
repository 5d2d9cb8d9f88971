#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "slpra/access.hpp"
#include "slpra/error.hpp"
#include "slpra/heavy_path.hpp"
#include "slpra/slp.hpp"

namespace slpra {

/// Per H-node v: the nearest strict H-ancestor whose light child hangs left
/// (next_left) or right (next_right) of the heavy path suffix, and the
/// terminal that ends v's heavy path suffix (tail).
struct LightLinks {
    std::vector<RuleId> next_left;
    std::vector<RuleId> next_right;
    std::vector<RuleId> tail;

    const std::vector<RuleId>& next(Side s) const { return s == Side::left ? next_left : next_right; }
};

inline bool hangs(const Slp& slp, const HeavyInfo& heavy, RuleId v, Side side)
{
    return slp.rule(v).is_pair() && heavy.light_side(v) == side;
}

inline LightLinks build_light_links(const Slp& slp, const HeavyInfo& heavy, const HForest& h)
{
    const std::size_t n = slp.rule_count();
    LightLinks links;
    links.next_left.assign(n, kNoRule);
    links.next_right.assign(n, kNoRule);
    links.tail.assign(n, kNoRule);
    // H-parents have smaller ids than their children.
    for (RuleId v = 0; v < n; ++v) {
        const RuleId p = h.parent[v];
        if (p == kNoRule) {
            links.tail[v] = v;
            continue;
        }
        links.tail[v] = links.tail[p];
        links.next_left[v] = hangs(slp, heavy, p, Side::left) ? p : links.next_left[p];
        links.next_right[v] = hangs(slp, heavy, p, Side::right) ? p : links.next_right[p];
    }
    return links;
}

/// Subtree roots whose expansions concatenate to S[i, j), left to right.
struct SpanPlan {
    RuleId lca = kNoRule;
    Length lca_start = 0;  // where S(lca) starts, relative to the searched node
    std::vector<RuleId> pieces;
};

struct LcaResult {
    RuleId node = kNoRule;
    Length i = 0;  // rebased into S(node)
    Length j = 0;
};

struct ExtractStats {
    std::uint64_t accesses = 0;
    std::uint64_t decoded_chars = 0;
    std::uint64_t pieces = 0;
    AccessCost access_cost;
};

/// Appends S(v) to out with an explicit work stack.
inline void append_expansion(const Slp& slp, RuleId v, std::u32string& out)
{
    std::vector<RuleId> stack{v};
    while (!stack.empty()) {
        const RuleId x = stack.back();
        stack.pop_back();
        const Rule& r = slp.rule(x);
        if (r.is_terminal()) {
            out.push_back(r.ch);
        } else {
            stack.push_back(r.right);
            stack.push_back(r.left);
        }
    }
}

/// Substring extraction on top of an engine's search traces. Holds a
/// reference to the engine, which must outlive it.
class Extractor {
public:
    explicit Extractor(const Engine& engine)
        : engine_(&engine), links_(build_light_links(engine.slp(), engine.heavy(), engine.forest()))
    {
    }

    const LightLinks& links() const { return links_; }
    const Engine& engine() const { return *engine_; }

    /// Light children hanging on `side` of v's heavy path suffix, starting at
    /// v itself, top-down. Follows links, or every H-edge when `walk` is set.
    std::vector<RuleId> hanging(RuleId v, Side side, bool walk = false) const
    {
        std::vector<RuleId> out;
        collect(first(v, side, walk), side, 0, walk, out);
        return out;
    }

    SpanPlan plan(Length i, Length j, bool walk = false) const
    {
        return plan_in(engine_->slp().root(), i, j, walk, nullptr);
    }

    SpanPlan plan_node(RuleId v, Length i, Length j, bool walk = false) const
    {
        return plan_in(v, i, j, walk, nullptr);
    }

    LcaResult lca_of_paths(Length i, Length j) const
    {
        const SpanPlan p = plan_in(engine_->slp().root(), i, j, false, nullptr);
        return {p.lca, i - p.lca_start, j - p.lca_start};
    }

    std::u32string extract(Length i, Length j, ExtractStats* stats = nullptr, bool walk = false) const
    {
        return extract_in(engine_->slp().root(), i, j, stats, walk);
    }

    /// S(v)[i, j).
    std::u32string extract_node(RuleId v, Length i, Length j, ExtractStats* stats = nullptr) const
    {
        if (v >= engine_->slp().rule_count()) throw RangeError("rule id out of range");
        return extract_in(v, i, j, stats, false);
    }

private:
    RuleId first(RuleId v, Side side, bool walk) const
    {
        if (hangs(engine_->slp(), engine_->heavy(), v, side)) return v;
        return step_up(v, side, walk);
    }

    RuleId step_up(RuleId v, Side side, bool walk) const
    {
        if (!walk) return links_.next(side)[v];
        const HForest& h = engine_->forest();
        for (RuleId w = h.parent[v]; w != kNoRule; w = h.parent[w]) {
            if (hangs(engine_->slp(), engine_->heavy(), w, side)) return w;
        }
        return kNoRule;
    }

    // Light children of w and the hanging nodes after it while their size
    // exceeds `bound`, top-down.
    void collect(RuleId w, Side side, Length bound, bool walk, std::vector<RuleId>& out) const
    {
        const Slp& slp = engine_->slp();
        for (; w != kNoRule && slp.size(w) > bound; w = step_up(w, side, walk)) {
            out.push_back(engine_->heavy().light_child(slp, w));
        }
    }

    void collect_reversed(RuleId w, Side side, Length bound, bool walk, std::vector<RuleId>& out) const
    {
        const std::size_t mark = out.size();
        collect(w, side, bound, walk, out);
        std::reverse(out.begin() + static_cast<std::ptrdiff_t>(mark), out.end());
    }

    // Pieces after the target inside S(head), the target's own light child excluded.
    void after(const TraceStep& s, bool walk, std::vector<RuleId>& out) const
    {
        const RuleId h = s.head;
        switch (s.kind) {
        case StepCase::left:
            collect(step_up(s.exit, Side::left, walk), Side::left, 0, walk, out);
            out.push_back(links_.tail[h]);
            collect_reversed(first(h, Side::right, walk), Side::right, 0, walk, out);
            break;
        case StepCase::right:
            collect_reversed(first(h, Side::right, walk), Side::right, engine_->slp().size(s.exit), walk, out);
            break;
        case StepCase::hit:
            out.push_back(links_.tail[h]);
            collect_reversed(first(h, Side::right, walk), Side::right, 0, walk, out);
            break;
        }
    }

    // Pieces before the target inside S(head), the target's own light child excluded.
    void before(const TraceStep& s, bool walk, std::vector<RuleId>& out) const
    {
        const RuleId h = s.head;
        switch (s.kind) {
        case StepCase::left:
            collect(first(h, Side::left, walk), Side::left, engine_->slp().size(s.exit), walk, out);
            break;
        case StepCase::right:
            collect(first(h, Side::left, walk), Side::left, 0, walk, out);
            out.push_back(links_.tail[h]);
            collect_reversed(step_up(s.exit, Side::right, walk), Side::right, 0, walk, out);
            break;
        case StepCase::hit:
            collect(first(h, Side::left, walk), Side::left, 0, walk, out);
            out.push_back(links_.tail[h]);
            break;
        }
    }

    static bool same_descent(const TraceStep& a, const TraceStep& b)
    {
        return a.kind == b.kind && a.kind != StepCase::hit && a.exit == b.exit;
    }

    SpanPlan plan_in(RuleId v, Length i, Length j, bool walk, AccessCost* cost) const
    {
        const Slp& slp = engine_->slp();
        if (i >= j || j > slp.size(v)) throw RangeError("extraction span out of range");
        Trace ti;
        Trace tj;
        engine_->access_node(v, i, &ti, cost);
        engine_->access_node(v, j - 1, &tj, cost);

        SpanPlan plan;
        Length head_start = 0;
        std::size_t k = 0;
        while (k < ti.steps.size() && k < tj.steps.size() && same_descent(ti.steps[k], tj.steps[k])) {
            head_start += ti.steps[k].offset;
            ++k;
        }
        const TraceStep& si = ti.steps[k];
        const TraceStep& sj = tj.steps[k];
        const RuleId h = si.head;
        if (si.kind == StepCase::hit && sj.kind == StepCase::hit) {
            // One character.
            plan.lca = links_.tail[h];
            plan.lca_start = head_start + engine_->meta().z[h] - 1;
            plan.pieces.push_back(links_.tail[h]);
            return plan;
        }

        // The split node on h's heavy path: the shallower exit.
        RuleId split = si.exit;
        if (si.kind == StepCase::hit || (sj.kind != StepCase::hit && slp.size(sj.exit) > slp.size(si.exit))) split = sj.exit;
        plan.lca = split;
        plan.lca_start = head_start + engine_->meta().z[h] - engine_->meta().z[split];

        // Suffix of the target's piece on the i side, deepest heavy path first.
        if (si.kind == StepCase::hit) {
            plan.pieces.push_back(links_.tail[h]);
        } else {
            for (std::size_t s = ti.steps.size() - 1; s > k; --s) after(ti.steps[s], walk, plan.pieces);
        }

        if (si.kind == StepCase::left) {
            collect(step_up(si.exit, Side::left, walk), Side::left,
                    sj.kind == StepCase::left ? slp.size(sj.exit) : 0, walk, plan.pieces);
            if (sj.kind == StepCase::right) plan.pieces.push_back(links_.tail[h]);
        }
        if (sj.kind == StepCase::right) {
            collect_reversed(step_up(sj.exit, Side::right, walk), Side::right,
                             si.kind == StepCase::right ? slp.size(si.exit) : 0, walk, plan.pieces);
        }

        if (sj.kind == StepCase::hit) {
            plan.pieces.push_back(links_.tail[h]);
        } else {
            for (std::size_t s = k + 1; s < tj.steps.size(); ++s) before(tj.steps[s], walk, plan.pieces);
        }
        return plan;
    }

    std::u32string extract_in(RuleId v, Length i, Length j, ExtractStats* stats, bool walk) const
    {
        const Slp& slp = engine_->slp();
        if (i > j || j > slp.size(v)) throw RangeError("extraction span out of range");
        std::u32string out;
        if (i == j) return out;
        AccessCost cost;
        const SpanPlan p = plan_in(v, i, j, walk, &cost);
        out.reserve(static_cast<std::size_t>(j - i));
        for (RuleId piece : p.pieces) append_expansion(slp, piece, out);
        if (stats) {
            stats->accesses += 2;
            stats->decoded_chars += out.size();
            stats->pieces += p.pieces.size();
            stats->access_cost += cost;
        }
        return out;
    }

    const Engine* engine_;
    LightLinks links_;
};

}  // namespace slpra
