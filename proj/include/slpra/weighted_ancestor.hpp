#pragma once

// Weighted ancestor queries with distance-sensitive cost.
//
// All structures here answer the same question on a weighted forest: given a
// node u and a budget d smaller than the distance from u to beyond its root,
// find the node x on the way up with dist(u, x) <= d < dist(u, x) + w(x),
// where w(x) is the weight of the edge from x to its parent. Roots carry an
// "exit" weight standing for the distance past the root.
//
// HeavyIndex<K>   heavy paths of the forest, one interval-biased search tree
//                 per path, and the light representation L indexed by
//                 RootToLeafIndex (K = 0) or TopBottomIndex<K> (K >= 1).
// TopBottomIndex  bottom trees with few leaves, root-to-leaf trees for the
//                 top tree, and one UnaryIndex<K-1> over all bottom trees.
// UnaryIndex<K>   unary-path decomposition of the bottom trees and their
//                 branching representation B, itself indexed by HeavyIndex<K>.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "slpra/heavy_path.hpp"
#include "slpra/ibst.hpp"

namespace slpra {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct WeightedForest {
    std::vector<NodeId> parent;  // kNoNode for roots
    std::vector<Length> weight;  // edge to the parent; for a root, its exit weight

    std::size_t size() const { return parent.size(); }
};

/// Per-query counters. Owned by the caller; never shared between queries.
struct QueryCost {
    std::uint64_t visits = 0;               // IBST nodes or binary-search probes
    std::uint64_t predecessor_queries = 0;
    std::uint64_t fallbacks = 0;            // predecessor_from precondition misses
};

struct Located {
    NodeId node = kNoNode;
    Length dist = 0;  // dist(u, node)
};

struct WaBuildCounters {
    std::uint64_t work = 0;  // nodes, path entries and IBST search steps; excludes RMQ tables
    IbstBuildStats ibst;
};

/// Structural figures per recursion level (level 0 is the outermost forest).
struct WaLevelStats {
    std::uint64_t forests = 0;
    std::uint64_t nodes = 0;
    std::uint64_t paths = 0;
    std::uint64_t light_nodes = 0;
    std::uint32_t max_light_height = 0;
    std::uint64_t top_nodes = 0;
    std::uint64_t top_leaves = 0;
    std::uint64_t bottom_trees = 0;
    std::uint64_t bottom_nodes = 0;
    std::uint64_t branching_nodes = 0;
    // Bound audits, checked while building.
    bool light_height_ok = true;   // height(L) <= floor(log2 n) + 1
    bool top_leaves_ok = true;     // top leaves <= n / log2 n
    bool branching_ok = true;      // internal B nodes have >= 2 children
};

struct WaStats {
    std::vector<WaLevelStats> levels;

    WaLevelStats& at(std::size_t depth)
    {
        if (levels.size() <= depth) levels.resize(depth + 1);
        return levels[depth];
    }
};

namespace detail {

inline std::uint32_t floor_log2(std::uint64_t x) { return x == 0 ? 0 : static_cast<std::uint32_t>(std::bit_width(x) - 1); }
inline std::uint32_t ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1)); }

/// Children lists (CSR) and a parents-first order.
struct ForestShape {
    std::vector<std::uint32_t> child_begin;
    std::vector<NodeId> children;
    std::vector<NodeId> order;

    explicit ForestShape(const WeightedForest& f)
    {
        const std::size_t n = f.size();
        child_begin.assign(n + 1, 0);
        for (NodeId v = 0; v < n; ++v) {
            if (f.parent[v] != kNoNode) ++child_begin[f.parent[v] + 1];
        }
        for (std::size_t v = 0; v < n; ++v) child_begin[v + 1] += child_begin[v];
        children.resize(child_begin[n]);
        std::vector<std::uint32_t> fill(child_begin.begin(), child_begin.end() - 1);
        for (NodeId v = 0; v < n; ++v) {
            if (f.parent[v] != kNoNode) children[fill[f.parent[v]]++] = v;
        }
        order.reserve(n);
        for (NodeId v = 0; v < n; ++v) {
            if (f.parent[v] == kNoNode) order.push_back(v);
        }
        for (std::size_t head = 0; head < order.size(); ++head) {
            for (NodeId c : kids(order[head])) order.push_back(c);
        }
    }

    std::span<const NodeId> kids(NodeId v) const
    {
        return std::span<const NodeId>(children).subspan(child_begin[v], child_begin[v + 1] - child_begin[v]);
    }
    std::size_t degree(NodeId v) const { return child_begin[v + 1] - child_begin[v]; }
};

/// Paths stored back to back; path i is nodes[offset[i], offset[i+1]).
struct PathList {
    std::vector<NodeId> nodes;
    std::vector<std::size_t> offset{0};

    std::size_t size() const { return offset.size() - 1; }
    std::span<const NodeId> operator[](std::size_t i) const
    {
        return std::span<const NodeId>(nodes).subspan(offset[i], offset[i + 1] - offset[i]);
    }
    void close() { offset.push_back(nodes.size()); }
};

/// Heavy paths by subtree node count (ties: lowest id), each bottom-up.
inline PathList heavy_paths(const WeightedForest& f, const ForestShape& shape)
{
    const std::size_t n = f.size();
    std::vector<std::uint32_t> subtree(n, 1);
    for (auto it = shape.order.rbegin(); it != shape.order.rend(); ++it) {
        if (f.parent[*it] != kNoNode) subtree[f.parent[*it]] += subtree[*it];
    }
    std::vector<NodeId> heavy(n, kNoNode);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId c : shape.kids(v)) {
            const NodeId h = heavy[v];
            if (h == kNoNode || subtree[c] > subtree[h] || (subtree[c] == subtree[h] && c < h)) heavy[v] = c;
        }
    }
    PathList paths;
    paths.nodes.reserve(n);
    for (NodeId head : shape.order) {
        const NodeId p = f.parent[head];
        if (p != kNoNode && heavy[p] == head) continue;
        const std::size_t start = paths.nodes.size();
        for (NodeId x = head; x != kNoNode; x = heavy[x]) paths.nodes.push_back(x);
        std::reverse(paths.nodes.begin() + static_cast<std::ptrdiff_t>(start), paths.nodes.end());
        paths.close();
    }
    return paths;
}

/// Height in nodes of the longest root-to-leaf path.
inline std::uint32_t forest_height(const WeightedForest& f, const ForestShape& shape)
{
    std::vector<std::uint32_t> h(f.size(), 1);
    std::uint32_t best = 0;
    for (NodeId v : shape.order) {
        if (f.parent[v] != kNoNode) h[v] = h[f.parent[v]] + 1;
        best = std::max(best, h[v]);
    }
    return best;
}

}  // namespace detail

/// A set of upward paths, each with the cumulative weight below every entry
/// and a predecessor structure over those cumulative weights. Every forest
/// node has a home entry on one path. Storage is flat across paths.
class PathIndex {
public:
    struct PathView {
        std::span<const NodeId> nodes;  // bottom-up
        std::span<const Length> below;  // below[0] = 0, below[r+1] = below[r] + w(nodes[r])
        Length exit = 0;                // weight of the top node's edge

        Length end() const { return below.back() + exit; }
        NodeId top() const { return nodes.back(); }
        NodeId bottom() const { return nodes.front(); }
        std::size_t size() const { return nodes.size(); }
    };

    PathIndex() = default;

    PathIndex(const WeightedForest& f, const detail::PathList& paths, bool with_trees, WaBuildCounters& counters)
    {
        home_path_.assign(f.size(), kNoNode);
        home_index_.assign(f.size(), 0);
        const std::size_t total = paths.nodes.size();
        nodes_.reserve(total);
        below_.reserve(total);
        offset_.reserve(paths.size() + 1);
        offset_.push_back(0);
        exit_.reserve(paths.size());
        if (with_trees) {
            interval_of_raw_.reserve(total);
            raw_offset_.reserve(paths.size() + 1);
            raw_offset_.push_back(0);
            tree_of_.reserve(paths.size());
        }
        std::vector<Length> bounds;
        for (std::size_t pi = 0; pi < paths.size(); ++pi) {
            const auto nodes = paths[pi];
            const std::size_t base = nodes_.size();
            Length acc = 0;
            for (std::size_t r = 0; r < nodes.size(); ++r) {
                if (r > 0) acc += f.weight[nodes[r - 1]];
                nodes_.push_back(nodes[r]);
                below_.push_back(acc);
                if (home_path_[nodes[r]] == kNoNode) {
                    home_path_[nodes[r]] = static_cast<NodeId>(pi);
                    home_index_[nodes[r]] = static_cast<std::uint32_t>(r);
                }
            }
            offset_.push_back(nodes_.size());
            exit_.push_back(f.weight[nodes.back()]);
            counters.work += nodes.size();
            if (!with_trees) continue;

            bounds.clear();
            for (std::size_t r = 0; r < nodes.size(); ++r) {
                const Length b = below_[base + r];
                if (bounds.empty() || bounds.back() != b) {
                    bounds.push_back(b);
                    raw_of_interval_.push_back(static_cast<std::uint32_t>(r));
                } else {
                    raw_of_interval_.back() = static_cast<std::uint32_t>(r);
                }
                interval_of_raw_.push_back(static_cast<std::uint32_t>(bounds.size() - 1));
            }
            const Length end = acc + exit_.back();
            if (end > bounds.back()) {
                bounds.push_back(end);
            } else {
                // No room above the top value: it can never be an answer.
                raw_of_interval_.pop_back();
            }
            raw_offset_.push_back(raw_of_interval_.size());
            tree_of_.push_back(bounds.size() > 2 ? trees_.add(bounds, &counters.ibst) : kNoNode);
        }
    }

    std::size_t path_count() const { return exit_.size(); }

    PathView path(std::size_t i) const
    {
        const std::size_t b = offset_[i];
        const std::size_t n = offset_[i + 1] - b;
        return {std::span<const NodeId>(nodes_).subspan(b, n), std::span<const Length>(below_).subspan(b, n), exit_[i]};
    }

    NodeId path_of(NodeId u) const { return home_path_[u]; }
    std::uint32_t index_of(NodeId u) const { return home_index_[u]; }

    Length below(NodeId u) const { return below_[offset_[home_path_[u]] + home_index_[u]]; }
    /// Weight from u up to the top of its home path (t(u)).
    Length above(NodeId u) const
    {
        const NodeId pi = home_path_[u];
        return below_[offset_[pi + 1] - 1] - below(u);
    }
    /// Distance from u to the parent of its home path's top.
    Length reach(NodeId u) const
    {
        const NodeId pi = home_path_[u];
        return below_[offset_[pi + 1] - 1] + exit_[pi] - below(u);
    }

    /// Requires d < reach(u).
    Located locate(NodeId u, Length d, QueryCost& cost) const
    {
        const NodeId pi = home_path_[u];
        const std::size_t base = offset_[pi];
        const std::uint32_t r = home_index_[u];
        const Length from = below_[base + r];
        std::uint32_t interval = 0;
        cost.predecessor_queries += 1;
        if (tree_of_[pi] == kNoNode) {
            cost.visits += 1;
        } else {
            const IbstHit hit = trees_.predecessor_from(tree_of_[pi], interval_of_raw_[base + r], from + d);
            cost.visits += hit.visits;
            cost.fallbacks += hit.fallback ? 1 : 0;
            interval = static_cast<std::uint32_t>(hit.index);
        }
        const std::uint32_t x = raw_of_interval_[raw_offset_[pi] + interval];
        return {nodes_[base + x], below_[base + x] - from};
    }

    /// Binary search variant of locate; requires d < reach(u).
    Located locate_binary(NodeId u, Length d, QueryCost& cost) const
    {
        const NodeId pi = home_path_[u];
        const std::size_t base = offset_[pi];
        const std::size_t r = home_index_[u];
        const Length value = below_[base + r] + d;
        std::size_t lo = base + r;         // below <= value
        std::size_t hi = offset_[pi + 1];  // below > value, or past the end
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            ++cost.visits;
            if (below_[mid] <= value) lo = mid; else hi = mid;
        }
        cost.predecessor_queries += 1;
        return {nodes_[lo], below_[lo] - below_[base + r]};
    }

    /// The predecessor structure of a path, if it has more than one interval.
    std::optional<IbstView> tree(std::size_t path) const
    {
        if (tree_of_.empty() || tree_of_[path] == kNoNode) return std::nullopt;
        return IbstView(trees_, tree_of_[path]);
    }

    template <class F>
    void for_each_tree(F&& f) const
    {
        for (IbstPool::TreeId t = 0; t < trees_.tree_count(); ++t) f(IbstView(trees_, t));
    }

private:
    std::vector<std::size_t> offset_;
    std::vector<NodeId> nodes_;
    std::vector<Length> below_;
    std::vector<Length> exit_;
    std::vector<NodeId> home_path_;
    std::vector<std::uint32_t> home_index_;
    // Predecessor structures; paths with a single interval have none.
    std::vector<std::uint32_t> interval_of_raw_;  // aligned with nodes_
    std::vector<std::uint32_t> raw_of_interval_;  // highest entry holding each distinct value
    std::vector<std::size_t> raw_offset_;
    std::vector<NodeId> tree_of_;
    IbstPool trees_;
};

/// One predecessor structure per root-to-leaf path. O(n * height) space.
class RootToLeafIndex {
public:
    RootToLeafIndex() = default;

    RootToLeafIndex(const WeightedForest& f, WaBuildCounters& counters, WaStats&, std::size_t, bool)
    {
        const detail::ForestShape shape(f);
        detail::PathList paths;
        // Leaves in parents-first order keep home paths deterministic.
        for (NodeId v : shape.order) {
            if (shape.degree(v) != 0) continue;
            for (NodeId x = v; x != kNoNode; x = f.parent[x]) paths.nodes.push_back(x);
            paths.close();
        }
        counters.work += f.size();
        paths_ = PathIndex(f, paths, true, counters);
    }

    Located locate(NodeId u, Length d, QueryCost& cost) const { return paths_.locate(u, d, cost); }

    std::size_t path_count() const { return paths_.path_count(); }

    template <class F>
    void for_each_tree(F&& f) const { paths_.for_each_tree(f); }

private:
    PathIndex paths_;
};

template <int K> class HeavyIndex;
template <int K> class TopBottomIndex;
template <int K> class UnaryIndex;

namespace detail {

/// Root of each node's tree and the node count of every tree.
struct Components {
    std::vector<NodeId> root;
    std::vector<std::uint32_t> size;  // indexed by root

    Components(const WeightedForest& f, const ForestShape& shape) : root(f.size()), size(f.size(), 0)
    {
        for (NodeId v : shape.order) {
            root[v] = f.parent[v] == kNoNode ? v : root[f.parent[v]];
            ++size[root[v]];
        }
    }
};

}  // namespace detail

/// Heavy path decomposition of a forest plus its light representation L.
/// With `per_tree` set, size bounds refer to each tree of the forest rather
/// than to the whole forest.
template <int K>
class HeavyIndex {
public:
    using LightIndex = std::conditional_t<K == 0, RootToLeafIndex, TopBottomIndex<K>>;

    HeavyIndex() = default;

    HeavyIndex(const WeightedForest& f, WaBuildCounters& counters, WaStats& stats, std::size_t depth, bool per_tree)
    {
        const detail::ForestShape shape(f);
        paths_ = PathIndex(f, detail::heavy_paths(f, shape), true, counters);
        counters.work += f.size();

        // L: one vertex per path, measured between path tops.
        const std::size_t m = paths_.path_count();
        WeightedForest light;
        light.parent.assign(m, kNoNode);
        light.weight.assign(m, 0);
        attach_.assign(m, kNoNode);
        for (std::size_t pi = 0; pi < m; ++pi) {
            const auto p = paths_.path(pi);
            const NodeId a = f.parent[p.top()];
            light.weight[pi] = p.exit;
            if (a != kNoNode) {
                attach_[pi] = a;
                light.parent[pi] = paths_.path_of(a);
                light.weight[pi] += paths_.above(a);
            }
        }
        counters.work += m;

        WaLevelStats& s = stats.at(depth);
        s.forests += 1;
        s.nodes += f.size();
        s.paths += m;
        s.light_nodes += m;
        {
            const detail::ForestShape light_shape(light);
            const detail::Components comp(f, shape);
            std::vector<std::uint32_t> h(m, 1);
            for (NodeId x : light_shape.order) {
                if (light.parent[x] != kNoNode) h[x] = h[light.parent[x]] + 1;
                s.max_light_height = std::max(s.max_light_height, h[x]);
                const std::size_t n = per_tree ? comp.size[comp.root[paths_.path(x).top()]] : f.size();
                if (h[x] > detail::floor_log2(n) + 1) s.light_height_ok = false;
            }
        }

        light_ = std::make_unique<LightIndex>(light, counters, stats, depth, per_tree);
    }

    Located locate(NodeId u, Length d, QueryCost& cost) const
    {
        if (d < paths_.reach(u)) return paths_.locate(u, d, cost);
        const Length t_u = paths_.above(u);
        const Located hop = light_->locate(paths_.path_of(u), d - t_u, cost);
        const auto p = paths_.path(hop.node);
        const Length to_top = t_u + hop.dist;
        const NodeId a = attach_[hop.node];
        if (a == kNoNode) return {p.top(), to_top};
        const Length to_attach = to_top + p.exit;
        if (d < to_attach) return {p.top(), to_top};
        const Located on_path = paths_.locate(a, d - to_attach, cost);
        return {on_path.node, to_attach + on_path.dist};
    }

    const PathIndex& paths() const { return paths_; }

    /// Weight from u to beyond its root.
    Length total(NodeId u) const
    {
        Length acc = 0;
        for (NodeId x = u; x != kNoNode; x = attach_[paths_.path_of(x)]) acc += paths_.reach(x);
        return acc;
    }

    template <class F>
    void for_each_tree(F&& f) const
    {
        paths_.for_each_tree(f);
        light_->for_each_tree(f);
    }

private:
    PathIndex paths_;
    std::vector<NodeId> attach_;
    std::unique_ptr<LightIndex> light_;
};

/// Unary-path decomposition of a forest of bottom trees and its branching
/// representation B, where an edge weighs the child path's length plus the
/// original edge.
template <int K>
class UnaryIndex {
public:
    UnaryIndex() = default;

    UnaryIndex(const WeightedForest& f, WaBuildCounters& counters, WaStats& stats, std::size_t depth)
    {
        const detail::ForestShape shape(f);
        detail::PathList paths;
        paths.nodes.reserve(f.size());
        for (NodeId v : shape.order) {
            if (shape.degree(v) == 1) continue;  // bottoms are leaves and branching nodes
            paths.nodes.push_back(v);
            for (NodeId x = f.parent[v]; x != kNoNode && shape.degree(x) == 1; x = f.parent[x]) paths.nodes.push_back(x);
            paths.close();
        }
        counters.work += f.size();
        paths_ = PathIndex(f, paths, true, counters);

        const std::size_t m = paths_.path_count();
        WeightedForest branching;
        branching.parent.assign(m, kNoNode);
        branching.weight.assign(m, 0);
        for (std::size_t pi = 0; pi < m; ++pi) {
            const auto p = paths_.path(pi);
            branching.weight[pi] = p.end();
            const NodeId a = f.parent[p.top()];
            if (a != kNoNode) branching.parent[pi] = paths_.path_of(a);
        }
        counters.work += m;

        const detail::ForestShape bshape(branching);
        WaLevelStats& s = stats.at(depth);
        s.branching_nodes += m;
        for (NodeId b = 0; b < m; ++b) {
            if (bshape.degree(b) == 1) s.branching_ok = false;
        }
        heavy_ = std::make_unique<HeavyIndex<K>>(branching, counters, stats, depth + 1, true);
    }

    Located locate(NodeId u, Length d, QueryCost& cost) const
    {
        if (d < paths_.reach(u)) return paths_.locate(u, d, cost);
        // Distances in B are measured between path bottoms.
        const Length from_bottom = d + paths_.below(u);
        const Located hop = heavy_->locate(paths_.path_of(u), from_bottom, cost);
        const NodeId bottom = paths_.path(hop.node).bottom();
        const Located on_path = paths_.locate(bottom, from_bottom - hop.dist, cost);
        return {on_path.node, hop.dist + on_path.dist - paths_.below(u)};
    }

    template <class F>
    void for_each_tree(F&& f) const
    {
        paths_.for_each_tree(f);
        heavy_->for_each_tree(f);
    }

private:
    PathIndex paths_;
    std::unique_ptr<HeavyIndex<K>> heavy_;
};

/// Bottom trees (maximal subtrees with at most ceil(log2 n) leaves) and the
/// top tree. All bottom trees together form one forest with its own
/// UnaryIndex. d(v) is the weighted distance from v to its bottom-tree root.
template <int K>
class TopBottomIndex {
public:
    TopBottomIndex() = default;

    TopBottomIndex(const WeightedForest& f, WaBuildCounters& counters, WaStats& stats, std::size_t depth, bool per_tree)
    {
        const std::size_t n = f.size();
        const detail::ForestShape shape(f);
        const detail::Components comp(f, shape);
        auto tree_size = [&](NodeId v) -> std::size_t { return per_tree ? comp.size[comp.root[v]] : n; };
        auto threshold = [&](NodeId v) { return std::max<std::uint32_t>(1, detail::ceil_log2(tree_size(v))); };

        std::vector<std::uint32_t> leaves(n, 0);
        for (auto it = shape.order.rbegin(); it != shape.order.rend(); ++it) {
            const NodeId v = *it;
            if (shape.degree(v) == 0) leaves[v] = 1;
            if (f.parent[v] != kNoNode) leaves[f.parent[v]] += leaves[v];
        }

        local_.assign(n, 0);
        in_top_.assign(n, false);
        std::vector<NodeId> bottom_root(n, kNoNode);
        std::vector<Length> to_root(n, 0);  // d(v)
        WeightedForest top;
        WeightedForest bottom;
        for (NodeId v : shape.order) {
            const NodeId p = f.parent[v];
            if (leaves[v] > threshold(v)) {
                in_top_[v] = true;
                local_[v] = static_cast<NodeId>(top_global_.size());
                top_global_.push_back(v);
                top.parent.push_back(p == kNoNode ? kNoNode : local_[p]);
                top.weight.push_back(f.weight[v]);
                continue;
            }
            local_[v] = static_cast<NodeId>(bottom_global_.size());
            bottom_global_.push_back(v);
            bottom.weight.push_back(f.weight[v]);
            if (p == kNoNode || in_top_[p]) {
                bottom_root[v] = v;
                bottom.parent.push_back(kNoNode);
            } else {
                bottom_root[v] = bottom_root[p];
                to_root[v] = to_root[p] + f.weight[v];
                bottom.parent.push_back(local_[p]);
            }
            const NodeId r = bottom_root[v];
            reach_.push_back(to_root[v] + f.weight[r]);
            exit_top_.push_back(f.parent[r] == kNoNode ? kNoNode : local_[f.parent[r]]);
        }
        counters.work += n;

        WaLevelStats& s = stats.at(depth);
        const detail::ForestShape top_shape(top);
        std::vector<std::uint64_t> top_leaves(n, 0);
        std::uint64_t all_top_leaves = 0;
        std::uint64_t bottom_trees = 0;
        for (NodeId t = 0; t < top.size(); ++t) {
            if (top_shape.degree(t) != 0) continue;
            ++all_top_leaves;
            ++top_leaves[per_tree ? comp.root[top_global_[t]] : 0];
        }
        for (NodeId v = 0; v < n; ++v) {
            if (!in_top_[v] && bottom_root[v] == v) ++bottom_trees;
            const bool counted_root = per_tree ? comp.root[v] == v : v == 0;
            if (!counted_root) continue;
            const double size = static_cast<double>(tree_size(v));
            if (size >= 2 && static_cast<double>(top_leaves[v]) > size / std::log2(size)) s.top_leaves_ok = false;
        }
        s.top_nodes += top.size();
        s.top_leaves += all_top_leaves;
        s.bottom_trees += bottom_trees;
        s.bottom_nodes += bottom.size();

        top_ = RootToLeafIndex(top, counters, stats, depth, per_tree);
        if (bottom.size() > 0) bottoms_ = std::make_unique<UnaryIndex<K - 1>>(bottom, counters, stats, depth);
    }

    Located locate(NodeId u, Length d, QueryCost& cost) const
    {
        if (in_top_[u]) {
            const Located r = top_.locate(local_[u], d, cost);
            return {top_global_[r.node], r.dist};
        }
        const NodeId b = local_[u];
        const Length reach = reach_[b];
        if (d < reach) {
            const Located r = bottoms_->locate(b, d, cost);
            return {bottom_global_[r.node], r.dist};
        }
        const Located r = top_.locate(exit_top_[b], d - reach, cost);
        return {top_global_[r.node], reach + r.dist};
    }

    template <class F>
    void for_each_tree(F&& f) const
    {
        top_.for_each_tree(f);
        if (bottoms_) bottoms_->for_each_tree(f);
    }

private:
    std::vector<NodeId> local_;
    std::vector<bool> in_top_;
    // Per bottom node: d(v) plus the weight of its bottom root's edge, and
    // the top node above that root.
    std::vector<Length> reach_;
    std::vector<NodeId> exit_top_;
    std::vector<NodeId> bottom_global_;
    std::vector<NodeId> top_global_;
    RootToLeafIndex top_;
    std::unique_ptr<UnaryIndex<K - 1>> bottoms_;
};

inline WeightedForest side_forest(const HForest& h, Side side)
{
    WeightedForest f;
    f.parent = h.parent;
    f.weight = h.weights(side);
    for (RuleId r : h.roots) f.weight[r] = 0;
    return f;
}

/// Answer of a weighted ancestor query on H, in size-sequence terms: `node`
/// is v_{i+1} on u's heavy path suffix whose light child holds the target,
/// `cum` is l_i (or r_i) and `step` is i.
struct WaHit {
    RuleId node = kNoRule;
    Length cum = 0;
    std::uint32_t step = 0;
};

/// Weighted ancestor index over H, one per side, built with a fixed
/// recursion depth (levels 0, 1 or 2).
class WaIndex {
public:
    static constexpr int kMaxLevels = 2;

    WaIndex() = default;

    WaIndex(const HForest& h, int levels) : levels_(levels), depth_(h.depth)
    {
        if (levels < 0 || levels > kMaxLevels) throw ArgumentError("levels must be 0, 1 or 2");
        switch (levels) {
        case 0: index_ = make<0>(h); break;
        case 1: index_ = make<1>(h); break;
        default: index_ = make<2>(h); break;
        }
    }

    int levels() const { return levels_; }
    const WaStats& stats() const { return stats_; }
    std::uint64_t build_work() const { return counters_.work + counters_.ibst.search_steps + counters_.ibst.nodes; }
    const WaBuildCounters& counters() const { return counters_; }

    /// Total side weight from u to its H-root.
    Length total(Side side, RuleId u) const
    {
        return std::visit([&](const auto& ix) { return (side == Side::left ? ix.left : ix.right).total(u); }, index_);
    }

    /// Requires d < total(side, u).
    Located locate(Side side, RuleId u, Length d, QueryCost& cost) const
    {
        return std::visit([&](const auto& ix) { return (side == Side::left ? ix.left : ix.right).locate(u, d, cost); }, index_);
    }

    /// Finds the step i with cum_i <= t < cum_{i+1} on u's heavy path suffix,
    /// where cum_i is 1 plus the side weight of the first i nodes. Returns
    /// nullopt when t exceeds the total side weight to the H-root.
    std::optional<WaHit> query(RuleId u, Length t, Side side, QueryCost& cost) const
    {
        if (t == 0 || t - 1 >= total(side, u)) return std::nullopt;
        const Located x = locate(side, u, t - 1, cost);
        return WaHit{x.node, 1 + x.dist, depth_[u] - depth_[x.node]};
    }

    const PathIndex& heavy_paths(Side side) const
    {
        return std::visit([&](const auto& ix) -> const PathIndex& { return (side == Side::left ? ix.left : ix.right).paths(); }, index_);
    }

    template <class F>
    void for_each_tree(F&& f) const
    {
        std::visit([&](const auto& ix) {
            ix.left.for_each_tree(f);
            ix.right.for_each_tree(f);
        }, index_);
    }

private:
    template <int K>
    struct Sides {
        HeavyIndex<K> left;
        HeavyIndex<K> right;
    };

    template <int K>
    Sides<K> make(const HForest& h)
    {
        Sides<K> s;
        s.left = HeavyIndex<K>(side_forest(h, Side::left), counters_, stats_, 0, false);
        s.right = HeavyIndex<K>(side_forest(h, Side::right), counters_, stats_, 0, false);
        return s;
    }

    int levels_ = 1;
    std::vector<std::uint32_t> depth_;
    WaBuildCounters counters_;
    WaStats stats_;
    std::variant<Sides<0>, Sides<1>, Sides<2>> index_;
};

/// Weighted ancestors by walking heavy paths of the forest and binary
/// searching the path that holds the answer. O(n) space.
class LinearWaIndex {
public:
    LinearWaIndex() = default;

    explicit LinearWaIndex(const WeightedForest& f) : parent_(f.parent)
    {
        const detail::ForestShape shape(f);
        WaBuildCounters counters;
        paths_ = PathIndex(f, detail::heavy_paths(f, shape), false, counters);
        work_ = counters.work + f.size();
    }

    /// Requires d below the distance past u's root.
    Located locate(NodeId u, Length d, QueryCost& cost) const
    {
        Length acc = 0;
        for (NodeId x = u;;) {
            const Length reach = paths_.reach(x);
            if (d < reach) {
                const Located r = paths_.locate_binary(x, d, cost);
                return {r.node, acc + r.dist};
            }
            acc += reach;
            d -= reach;
            x = parent_[paths_.path(paths_.path_of(x)).top()];
            if (x == kNoNode) throw RangeError("weighted ancestor budget exceeds the path to the root");
        }
    }

    const PathIndex& paths() const { return paths_; }
    std::uint64_t build_work() const { return work_; }

private:
    std::vector<NodeId> parent_;
    PathIndex paths_;
    std::uint64_t work_ = 0;
};

}  // namespace slpra
