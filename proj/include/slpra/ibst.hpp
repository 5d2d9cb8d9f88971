#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slpra/error.hpp"
#include "slpra/rmq.hpp"
#include "slpra/slp.hpp"

namespace slpra {

struct IbstBuildStats {
    std::uint64_t search_steps = 0;  // doubling and binary search probes
    std::uint64_t nodes = 0;
};

struct IbstHit {
    std::size_t index = 0;  // i with l_i <= p < l_{i+1}
    Length value = 0;       // l_i
    std::uint32_t visits = 0;
    bool fallback = false;  // predecessor_from saw p < l_k and restarted at the root
};

/// Interval-biased search trees stored side by side in flat arrays. A tree
/// over strictly increasing boundaries l_0 < ... < l_m has one node per
/// half-open interval [l_i, l_{i+1}); a query whose answer interval has
/// length x visits at most floor(log2(U/x)) + 1 nodes, U = l_m - l_0.
class IbstPool {
public:
    using TreeId = std::uint32_t;
    static constexpr std::int32_t kNil = -1;

    TreeId add(std::span<const Length> boundaries, IbstBuildStats* stats = nullptr)
    {
        for (std::size_t i = 1; i < boundaries.size(); ++i) {
            if (boundaries[i] <= boundaries[i - 1]) {
                throw ArgumentError("interval-biased search tree needs strictly increasing boundaries");
            }
        }
        Tree t;
        t.node_base = left_.size();
        t.bound_base = bounds_.size();
        t.bound_count = static_cast<std::uint32_t>(boundaries.size());
        t.count = boundaries.size() < 2 ? 0 : static_cast<std::uint32_t>(boundaries.size() - 1);
        bounds_.insert(bounds_.end(), boundaries.begin(), boundaries.end());
        const auto id = static_cast<TreeId>(trees_.size());
        if (t.count > 0) {
            const std::size_t m = t.count;
            left_.resize(left_.size() + m, kNil);
            right_.resize(right_.size() + m, kNil);
            depth_.resize(depth_.size() + m, 0);
            lca_.resize(lca_.size() + m, kNil);
            std::vector<Length> lengths(m);
            for (std::size_t i = 0; i < m; ++i) lengths[i] = boundaries[i + 1] - boundaries[i];
            const SparseTableMax<Length> rmq(lengths);
            IbstBuildStats local;
            t.root = build(t, rmq, 0, static_cast<std::int32_t>(m) - 1, 1, local);
            link_last(t);
            local.nodes = m;
            if (stats) {
                stats->search_steps += local.search_steps;
                stats->nodes += local.nodes;
            }
        }
        trees_.push_back(t);
        return id;
    }

    std::size_t tree_count() const { return trees_.size(); }
    std::size_t interval_count(TreeId t) const { return trees_[t].count; }
    std::span<const Length> boundaries(TreeId t) const
    {
        return std::span<const Length>(bounds_).subspan(trees_[t].bound_base, trees_[t].bound_count);
    }
    Length universe(TreeId t) const
    {
        const Tree& x = trees_[t];
        return x.count == 0 ? 0 : bounds_[x.bound_base + x.count] - bounds_[x.bound_base];
    }

    std::int32_t root(TreeId t) const { return trees_[t].root; }
    std::int32_t left(TreeId t, std::size_t i) const { return left_[trees_[t].node_base + i]; }
    std::int32_t right(TreeId t, std::size_t i) const { return right_[trees_[t].node_base + i]; }
    std::uint32_t depth(TreeId t, std::size_t i) const { return depth_[trees_[t].node_base + i]; }
    /// Lowest common ancestor of node i and the node holding the last interval.
    std::int32_t lca_with_last(TreeId t, std::size_t i) const { return lca_[trees_[t].node_base + i]; }

    IbstHit predecessor(TreeId t, Length p) const
    {
        check(t, p);
        return search(trees_[t], trees_[t].root, p);
    }

    /// Same answer as predecessor(p) given p >= l_k, starting the descent at
    /// the lowest common ancestor of interval k and the last interval.
    IbstHit predecessor_from(TreeId t, std::size_t k, Length p) const
    {
        check(t, p);
        const Tree& x = trees_[t];
        if (k >= x.count) throw RangeError("interval index out of range");
        if (p < bounds_[x.bound_base + k]) {
            IbstHit h = search(x, x.root, p);
            h.fallback = true;
            return h;
        }
        return search(x, lca_[x.node_base + k], p);
    }

    std::string to_dot(TreeId t, const std::string& name = "ibst") const
    {
        const Tree& x = trees_[t];
        std::string out = "digraph " + name + " {\n";
        for (std::size_t i = 0; i < x.count; ++i) {
            const std::string id = "n" + std::to_string(i);
            out += "  " + id + " [label=\"[" + std::to_string(bounds_[x.bound_base + i]) + "," +
                   std::to_string(bounds_[x.bound_base + i + 1]) + ")\"];\n";
            if (left(t, i) != kNil) out += "  " + id + " -> n" + std::to_string(left(t, i)) + ";\n";
            if (right(t, i) != kNil) out += "  " + id + " -> n" + std::to_string(right(t, i)) + ";\n";
        }
        out += "}\n";
        return out;
    }

private:
    struct Tree {
        std::size_t node_base = 0;
        std::size_t bound_base = 0;
        std::uint32_t bound_count = 0;
        std::uint32_t count = 0;
        std::int32_t root = kNil;
    };

    void check(TreeId t, Length p) const
    {
        const Tree& x = trees_[t];
        if (x.count == 0 || p < bounds_[x.bound_base] || p > bounds_[x.bound_base + x.count]) {
            throw RangeError("predecessor query outside the universe");
        }
    }

    IbstHit search(const Tree& t, std::int32_t node, Length p) const
    {
        const auto last = static_cast<std::int32_t>(t.count) - 1;
        const Length* b = bounds_.data() + t.bound_base;
        IbstHit h;
        while (node != kNil) {
            ++h.visits;
            if (p < b[node]) {
                node = left_[t.node_base + node];
            } else if (p >= b[node + 1] && node != last) {
                node = right_[t.node_base + node];
            } else {
                h.index = static_cast<std::size_t>(node);
                h.value = b[node];
                return h;
            }
        }
        throw RangeError("interval-biased search tree is inconsistent");
    }

    // Largest i in [j, k] with l_i - l_j <= (l_{k+1} - l_j) / 2, found by a
    // doubling scan from both ends followed by a binary search.
    std::int32_t split_point(const Tree& t, std::int32_t j, std::int32_t k, IbstBuildStats& stats) const
    {
        const Length* b = bounds_.data() + t.bound_base;
        const Length base = b[j];
        const Length span = b[k + 1] - base;
        auto in_lower_half = [&](std::int32_t i) {
            const Length a = b[i] - base;
            return a <= span - a;
        };
        std::int32_t lo = j;      // known true
        std::int32_t hi = k + 1;  // known false
        for (std::int32_t off = 1; hi - lo > 1; off *= 2) {
            const std::int32_t a = j + off;
            if (a >= hi) break;
            ++stats.search_steps;
            if (!in_lower_half(a)) {
                hi = a;
                break;
            }
            lo = a;
            const std::int32_t c = k + 1 - off;
            if (c <= lo) break;
            ++stats.search_steps;
            if (in_lower_half(c)) {
                lo = c;
                break;
            }
            hi = c;
        }
        while (hi - lo > 1) {
            const std::int32_t mid = lo + (hi - lo) / 2;
            ++stats.search_steps;
            if (in_lower_half(mid)) lo = mid; else hi = mid;
        }
        return lo;
    }

    std::int32_t build(const Tree& t, const SparseTableMax<Length>& rmq, std::int32_t j, std::int32_t k,
                       std::uint32_t depth, IbstBuildStats& stats)
    {
        if (j > k) return kNil;
        const Length* b = bounds_.data() + t.bound_base;
        std::int32_t i = j;
        if (j < k) {
            const Length span = b[k + 1] - b[j];
            const auto widest = static_cast<std::int32_t>(rmq.query(static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
            const Length len = b[widest + 1] - b[widest];
            i = len > span - len ? widest : split_point(t, j, k, stats);
        }
        depth_[t.node_base + i] = static_cast<std::uint8_t>(depth);
        const std::int32_t l = build(t, rmq, j, i - 1, depth + 1, stats);
        const std::int32_t r = build(t, rmq, i + 1, k, depth + 1, stats);
        left_[t.node_base + i] = l;
        right_[t.node_base + i] = r;
        return i;
    }

    void link_last(const Tree& t)
    {
        // Nodes on the right spine are their own LCA with the last interval;
        // every other node inherits the spine ancestor above it.
        std::vector<std::pair<std::int32_t, std::int32_t>> stack{{t.root, t.root}};
        while (!stack.empty()) {
            const auto [node, spine] = stack.back();
            stack.pop_back();
            lca_[t.node_base + node] = spine;
            const std::int32_t l = left_[t.node_base + node];
            const std::int32_t r = right_[t.node_base + node];
            if (l != kNil) stack.emplace_back(l, spine);
            if (r != kNil) stack.emplace_back(r, spine == node ? r : spine);
        }
    }

    std::vector<Tree> trees_;
    std::vector<Length> bounds_;
    std::vector<std::int32_t> left_;
    std::vector<std::int32_t> right_;
    std::vector<std::uint8_t> depth_;
    std::vector<std::int32_t> lca_;
};

/// Read-only handle on one tree of a pool.
class IbstView {
public:
    using Hit = IbstHit;
    static constexpr std::int32_t kNil = IbstPool::kNil;

    IbstView(const IbstPool& pool, IbstPool::TreeId id) : pool_(&pool), id_(id) {}

    std::size_t interval_count() const { return pool_->interval_count(id_); }
    bool empty() const { return interval_count() == 0; }
    std::span<const Length> boundaries() const { return pool_->boundaries(id_); }
    Length universe() const { return pool_->universe(id_); }
    std::int32_t root() const { return pool_->root(id_); }
    std::int32_t left(std::size_t i) const { return pool_->left(id_, i); }
    std::int32_t right(std::size_t i) const { return pool_->right(id_, i); }
    std::uint32_t depth(std::size_t i) const { return pool_->depth(id_, i); }
    std::int32_t lca_with_last(std::size_t i) const { return pool_->lca_with_last(id_, i); }
    Hit predecessor(Length p) const { return pool_->predecessor(id_, p); }
    Hit predecessor_from(std::size_t k, Length p) const { return pool_->predecessor_from(id_, k, p); }
    std::string to_dot(const std::string& name = "ibst") const { return pool_->to_dot(id_, name); }

private:
    const IbstPool* pool_;
    IbstPool::TreeId id_;
};

/// A single interval-biased search tree owning its storage.
class IntervalBiasedTree {
public:
    using Hit = IbstHit;
    static constexpr std::int32_t kNil = IbstPool::kNil;

    IntervalBiasedTree() { pool_.add({}); }

    explicit IntervalBiasedTree(std::span<const Length> boundaries, IbstBuildStats* stats = nullptr)
    {
        pool_.add(boundaries, stats);
    }

    IbstView view() const { return IbstView(pool_, 0); }

    std::size_t interval_count() const { return view().interval_count(); }
    bool empty() const { return view().empty(); }
    std::span<const Length> boundaries() const { return view().boundaries(); }
    Length universe() const { return view().universe(); }
    std::int32_t root() const { return view().root(); }
    std::int32_t left(std::size_t i) const { return view().left(i); }
    std::int32_t right(std::size_t i) const { return view().right(i); }
    std::uint32_t depth(std::size_t i) const { return view().depth(i); }
    std::int32_t lca_with_last(std::size_t i) const { return view().lca_with_last(i); }
    Hit predecessor(Length p) const { return view().predecessor(p); }
    Hit predecessor_from(std::size_t k, Length p) const { return view().predecessor_from(k, p); }
    std::string to_dot(const std::string& name = "ibst") const { return view().to_dot(name); }

private:
    IbstPool pool_;
};

}  // namespace slpra
