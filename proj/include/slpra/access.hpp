#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slpra/error.hpp"
#include "slpra/heavy_path.hpp"
#include "slpra/slp.hpp"
#include "slpra/weighted_ancestor.hpp"

namespace slpra {

enum class EngineKind : std::uint8_t { baseline, linear, biased };

inline std::string_view to_string(EngineKind k)
{
    switch (k) {
    case EngineKind::baseline: return "baseline";
    case EngineKind::linear: return "linear";
    case EngineKind::biased: return "biased";
    }
    return "?";
}

inline EngineKind parse_engine_kind(std::string_view s)
{
    if (s == "baseline") return EngineKind::baseline;
    if (s == "linear") return EngineKind::linear;
    if (s == "biased") return EngineKind::biased;
    throw ArgumentError("unknown engine: " + std::string(s));
}

struct EngineOptions {
    EngineKind kind = EngineKind::biased;
    int levels = 1;
};

enum class StepCase : std::uint8_t { hit, left, right };

/// One heavy path visited by a search. For left and right steps, `exit` is
/// the node v_{i+1} whose light child `child` holds the target, `offset` is
/// where S(child) starts inside S(head) (0-based) and `rebased` is the
/// 1-based position inside S(child).
struct TraceStep {
    RuleId head = kNoRule;
    StepCase kind = StepCase::hit;
    Length position = 0;  // 1-based position inside S(head)
    RuleId exit = kNoRule;
    Length dist = 0;      // side weight between head and exit
    std::uint32_t step = 0;  // i, the number of heavy edges from head to exit
    RuleId child = kNoRule;
    Length offset = 0;
    Length rebased = 0;
};

struct Trace {
    std::vector<TraceStep> steps;
    char32_t ch = 0;

    std::size_t descents() const { return steps.empty() ? 0 : steps.size() - 1; }
};

/// Counters for one query; returned to the caller, never shared.
struct AccessCost {
    std::uint64_t rule_visits = 0;
    std::uint64_t predecessor_visits = 0;
    std::uint64_t predecessor_queries = 0;
    std::uint64_t path_switches = 0;
    std::uint64_t fallbacks = 0;

    AccessCost& operator+=(const AccessCost& o)
    {
        rule_visits += o.rule_visits;
        predecessor_visits += o.predecessor_visits;
        predecessor_queries += o.predecessor_queries;
        path_switches += o.path_switches;
        fallbacks += o.fallbacks;
        return *this;
    }
};

/// Random access over an SLP. Immutable after construction; all queries are
/// const and safe to run concurrently.
class Engine {
public:
    Engine(Slp slp, EngineOptions opt = {}) : slp_(std::move(slp)), opt_(opt)
    {
        if (slp_.empty()) throw ArgumentError("engine over an empty grammar");
        heavy_ = decompose(slp_);
        forest_ = build_forest(slp_, heavy_);
        meta_ = suffix_meta(slp_, forest_);
        switch (opt_.kind) {
        case EngineKind::baseline: break;
        case EngineKind::linear:
            linear_left_ = std::make_unique<LinearWaIndex>(side_forest(forest_, Side::left));
            linear_right_ = std::make_unique<LinearWaIndex>(side_forest(forest_, Side::right));
            build_work_ = linear_left_->build_work() + linear_right_->build_work();
            break;
        case EngineKind::biased:
            wa_ = std::make_unique<WaIndex>(forest_, opt_.levels);
            build_work_ = wa_->build_work();
            break;
        }
    }

    Engine(Engine&&) noexcept = default;
    Engine& operator=(Engine&&) noexcept = default;

    const Slp& slp() const { return slp_; }
    const HeavyInfo& heavy() const { return heavy_; }
    const HForest& forest() const { return forest_; }
    const SuffixMeta& meta() const { return meta_; }
    EngineKind kind() const { return opt_.kind; }
    int levels() const { return opt_.levels; }
    Length length() const { return slp_.length(); }
    std::uint64_t build_work() const { return build_work_; }
    /// Weighted ancestor index; only present for the biased engine.
    const WaIndex* wa() const { return wa_.get(); }

    char32_t access(Length i, AccessCost* cost = nullptr) const
    {
        check_index(i);
        return search(slp_.root(), i + 1, nullptr, cost);
    }

    Trace access_with_trace(Length i, AccessCost* cost = nullptr) const
    {
        check_index(i);
        Trace t;
        t.ch = search(slp_.root(), i + 1, &t, cost);
        return t;
    }

    AccessCost query_cost(Length i) const
    {
        AccessCost c;
        access(i, &c);
        return c;
    }

    /// Access inside S(v), 0-based.
    char32_t access_node(RuleId v, Length i, Trace* trace = nullptr, AccessCost* cost = nullptr) const
    {
        if (v >= slp_.rule_count()) throw RangeError("rule id out of range");
        if (i >= slp_.size(v)) throw RangeError("position out of range");
        return search(v, i + 1, trace, cost);
    }

private:
    void check_index(Length i) const
    {
        if (i >= slp_.length()) {
            throw RangeError("position " + std::to_string(i) + " out of range for length " + std::to_string(slp_.length()));
        }
    }

    Located locate(Side side, RuleId u, Length d, QueryCost& qc) const
    {
        if (opt_.kind == EngineKind::linear) {
            return (side == Side::left ? *linear_left_ : *linear_right_).locate(u, d, qc);
        }
        return wa_->locate(side, u, d, qc);
    }

    // Follows rules top-down, recording the heavy paths it travels.
    TraceStep walk(RuleId u, Length p, AccessCost& cost) const
    {
        TraceStep s{u, StepCase::hit, p};
        Length offset = 0;
        for (RuleId x = u;; ) {
            ++cost.rule_visits;
            const Rule& r = slp_.rule(x);
            if (r.is_terminal()) return s;
            const Length ls = slp_.size(r.left);
            const bool go_left = p - offset <= ls;
            const RuleId next = go_left ? r.left : r.right;
            const Length next_offset = go_left ? offset : offset + ls;
            if ((go_left ? Side::left : Side::right) != heavy_.heavy_side[x]) {
                s.kind = go_left ? StepCase::left : StepCase::right;
                s.exit = x;
                s.step = forest_.depth[u] - forest_.depth[x];
                s.child = next;
                s.offset = next_offset;
                s.rebased = p - next_offset;
                s.dist = go_left ? next_offset : slp_.size(u) - next_offset - slp_.size(next);
                return s;
            }
            offset = next_offset;
            x = next;
        }
    }

    TraceStep step(RuleId u, Length p, AccessCost& cost) const
    {
        const Length z = meta_.z[u];
        TraceStep s{u, StepCase::hit, p};
        ++cost.rule_visits;
        if (p == z) return s;
        QueryCost qc;
        if (p < z) {
            const Located x = locate(Side::left, u, p - 1, qc);
            s.kind = StepCase::left;
            s.exit = x.node;
            s.dist = x.dist;
            s.child = slp_.rule(x.node).left;
            s.offset = x.dist;
        } else {
            const Located x = locate(Side::right, u, slp_.size(u) - p, qc);
            s.kind = StepCase::right;
            s.exit = x.node;
            s.dist = x.dist;
            s.child = slp_.rule(x.node).right;
            s.offset = slp_.size(u) - x.dist - slp_.size(s.child);
        }
        s.step = forest_.depth[u] - forest_.depth[s.exit];
        s.rebased = p - s.offset;
        cost.predecessor_visits += qc.visits;
        cost.predecessor_queries += qc.predecessor_queries;
        cost.fallbacks += qc.fallbacks;
        return s;
    }

    char32_t search(RuleId u, Length p, Trace* trace, AccessCost* cost) const
    {
        AccessCost local;
        for (;;) {
            const TraceStep s = opt_.kind == EngineKind::baseline ? walk(u, p, local) : step(u, p, local);
            if (trace) trace->steps.push_back(s);
            if (s.kind == StepCase::hit) break;
            ++local.path_switches;
            u = s.child;
            p = s.rebased;
        }
        if (cost) *cost += local;
        return meta_.ch[u];
    }

    Slp slp_;
    EngineOptions opt_;
    HeavyInfo heavy_;
    HForest forest_;
    SuffixMeta meta_;
    std::unique_ptr<WaIndex> wa_;
    std::unique_ptr<LinearWaIndex> linear_left_;
    std::unique_ptr<LinearWaIndex> linear_right_;
    std::uint64_t build_work_ = 0;
};

}  // namespace slpra
