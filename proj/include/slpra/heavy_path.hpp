#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slpra/slp.hpp"

namespace slpra {

enum class Side : std::uint8_t { left, right };

constexpr Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }

/// Heavy child per pair rule, chosen by expansion length. Equal sizes make
/// the left child heavy.
struct HeavyInfo {
    std::vector<Side> heavy_side;

    RuleId heavy_child(const Slp& slp, RuleId v) const
    {
        const Rule& r = slp.rule(v);
        return heavy_side[v] == Side::left ? r.left : r.right;
    }
    RuleId light_child(const Slp& slp, RuleId v) const
    {
        const Rule& r = slp.rule(v);
        return heavy_side[v] == Side::left ? r.right : r.left;
    }
    /// Side on which the light child of pair rule v hangs.
    Side light_side(RuleId v) const { return opposite(heavy_side[v]); }
};

inline HeavyInfo decompose(const Slp& slp)
{
    HeavyInfo info;
    info.heavy_side.assign(slp.rule_count(), Side::left);
    for (RuleId v = 0; v < slp.rule_count(); ++v) {
        const Rule& r = slp.rule(v);
        if (r.is_pair() && slp.size(r.right) > slp.size(r.left)) {
            info.heavy_side[v] = Side::right;
        }
    }
    return info;
}

/// The heavy path suffix forest H. The parent of a pair rule is its heavy
/// child; terminals are the roots. Each edge carries a left and a right
/// weight, exactly one of which can be non-zero: the size of the light
/// child on that side.
struct HForest {
    std::vector<RuleId> parent;
    std::vector<Length> left_weight;
    std::vector<Length> right_weight;
    std::vector<std::uint32_t> depth;  // edges to the H-root
    std::vector<RuleId> roots;

    std::size_t node_count() const { return parent.size(); }
    bool is_root(RuleId v) const { return parent[v] == kNoRule; }

    const std::vector<Length>& weights(Side s) const { return s == Side::left ? left_weight : right_weight; }
    Length weight(Side s, RuleId v) const { return weights(s)[v]; }

    std::uint32_t max_depth() const
    {
        return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
    }
};

inline HForest build_forest(const Slp& slp, const HeavyInfo& heavy)
{
    const std::size_t n = slp.rule_count();
    HForest h;
    h.parent.assign(n, kNoRule);
    h.left_weight.assign(n, 0);
    h.right_weight.assign(n, 0);
    h.depth.assign(n, 0);
    for (RuleId v = 0; v < n; ++v) {
        const Rule& r = slp.rule(v);
        if (r.is_terminal()) {
            h.roots.push_back(v);
            continue;
        }
        const RuleId u = heavy.heavy_child(slp, v);
        h.parent[v] = u;
        h.depth[v] = h.depth[u] + 1;
        if (heavy.heavy_side[v] == Side::left) {
            h.right_weight[v] = slp.size(r.right);
        } else {
            h.left_weight[v] = slp.size(r.left);
        }
    }
    return h;
}

/// Per node v: the 1-based position z of the terminal that ends v's heavy
/// path suffix inside S(v), and that terminal's character.
struct SuffixMeta {
    std::vector<Length> z;
    std::vector<char32_t> ch;
};

inline SuffixMeta suffix_meta(const Slp& slp, const HForest& h)
{
    SuffixMeta m;
    m.z.assign(slp.rule_count(), 1);
    m.ch.assign(slp.rule_count(), 0);
    // Rules are topologically ordered, so H-parents precede their children.
    for (RuleId v = 0; v < slp.rule_count(); ++v) {
        if (h.is_root(v)) {
            m.ch[v] = slp.rule(v).ch;
        } else {
            m.z[v] = h.left_weight[v] + m.z[h.parent[v]];
            m.ch[v] = m.ch[h.parent[v]];
        }
    }
    return m;
}

/// The heavy path suffix v_1 = v, v_2 = heavy(v_1), ..., ending at a terminal.
inline std::vector<RuleId> heavy_path_suffix(const HForest& h, RuleId v)
{
    std::vector<RuleId> path;
    for (RuleId x = v; x != kNoRule; x = h.parent[x]) path.push_back(x);
    return path;
}

/// A left or right size sequence. `raw[i]` is 1 plus the light sizes on
/// that side of the first i nodes of the suffix. Zero-weight steps repeat
/// values; `values` keeps each value once and `idx_map` its largest raw index.
struct SizeSeq {
    std::vector<Length> raw;
    std::vector<Length> values;
    std::vector<std::uint32_t> idx_map;

    /// Largest raw index i with raw[i] <= p, or nullopt when p < raw[0].
    std::optional<std::uint32_t> predecessor(Length p) const
    {
        const auto it = std::upper_bound(values.begin(), values.end(), p);
        if (it == values.begin()) return std::nullopt;
        return idx_map[static_cast<std::size_t>(it - values.begin()) - 1];
    }
};

struct SizeSequences {
    SizeSeq left;
    SizeSeq right;
};

/// Sequences for the suffix v_1..v_k given head first (as returned by
/// heavy_path_suffix).
inline SizeSequences size_sequences(const HForest& h, std::span<const RuleId> suffix)
{
    SizeSequences out;
    auto fill = [&](SizeSeq& seq, const std::vector<Length>& w) {
        Length acc = 1;
        for (std::size_t i = 0; i < suffix.size(); ++i) {
            seq.raw.push_back(acc);
            acc += w[suffix[i]];
        }
        for (std::size_t i = 0; i < seq.raw.size(); ++i) {
            if (!seq.values.empty() && seq.values.back() == seq.raw[i]) {
                seq.idx_map.back() = static_cast<std::uint32_t>(i);
            } else {
                seq.values.push_back(seq.raw[i]);
                seq.idx_map.push_back(static_cast<std::uint32_t>(i));
            }
        }
    };
    fill(out.left, h.left_weight);
    fill(out.right, h.right_weight);
    return out;
}

}  // namespace slpra
