#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "slpra/error.hpp"
#include "slpra/slp.hpp"
#include "slpra/substring.hpp"

namespace slpra {

/// A matcher reports, in strictly increasing order, every 0-based end
/// position e of T such that some substring of T ending at e is within edit
/// distance k of P.
template <class M>
concept Matcher = requires(const M& m, std::u32string_view p, std::u32string_view t, std::size_t k) {
    { m(p, t, k) } -> std::convertible_to<std::vector<Length>>;
};

inline void check_pattern(std::u32string_view pattern, std::size_t k)
{
    if (pattern.empty()) throw ArgumentError("pattern must not be empty");
    if (k >= pattern.size()) throw ArgumentError("k must be smaller than the pattern length");
}

/// Sellers' dynamic program: one column of m + 1 cells per text character.
inline std::vector<Length> sellers_match(std::u32string_view pattern, std::u32string_view text, std::size_t k)
{
    check_pattern(pattern, k);
    const std::size_t m = pattern.size();
    std::vector<std::size_t> col(m + 1);
    for (std::size_t i = 0; i <= m; ++i) col[i] = i;
    std::vector<Length> ends;
    for (std::size_t j = 0; j < text.size(); ++j) {
        std::size_t diag = col[0];  // D[i-1][j-1]
        col[0] = 0;
        for (std::size_t i = 1; i <= m; ++i) {
            const std::size_t up = col[i];  // D[i][j-1]
            const std::size_t sub = diag + (pattern[i - 1] == text[j] ? 0 : 1);
            col[i] = std::min({sub, up + 1, col[i - 1] + 1});
            diag = up;
        }
        if (col[m] <= k) ends.push_back(j);
    }
    return ends;
}

struct SellersMatcher {
    std::vector<Length> operator()(std::u32string_view p, std::u32string_view t, std::size_t k) const
    {
        return sellers_match(p, t, k);
    }
};

struct BoundaryWindow {
    std::u32string text;
    Length offset = 0;      // where text starts inside S(v)
    Length left_part = 0;   // characters taken from S(v_l)
};

/// The last min(|S(v_l)|, m + k) characters of S(v_l) followed by the first
/// min(|S(v_r)|, m + k) characters of S(v_r).
inline BoundaryWindow boundary_window(const Extractor& ex, RuleId v, std::size_t m, std::size_t k)
{
    const Slp& slp = ex.engine().slp();
    const Rule& r = slp.rule(v);
    if (!r.is_pair()) throw ArgumentError("boundary window needs a pair rule");
    const Length reach = m + k;
    const Length ls = slp.size(r.left);
    const Length wl = std::min(ls, reach);
    const Length wr = std::min(slp.size(r.right), reach);
    return {ex.extract_node(v, ls - wl, ls + wr), ls - wl, wl};
}

struct SearchOptions {
    bool use_window = true;  // off only for mutation testing
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t windows = 0;
    std::uint64_t max_window = 0;
    std::uint64_t matcher_calls = 0;
    std::uint64_t local_matches = 0;  // memoized footprint: sum of per-node local lists
    std::uint64_t occurrences = 0;
};

namespace detail {

inline void check_sorted(const std::vector<Length>& ends)
{
    for (std::size_t i = 1; i < ends.size(); ++i) {
        if (ends[i] <= ends[i - 1]) throw Error("matcher output is not strictly increasing");
    }
}

}  // namespace detail

/// All end positions in S of substrings within edit distance k of the
/// pattern. Each rule is processed once; its occurrences are those of its
/// children (the right one shifted) plus the ends found only in the
/// boundary window.
template <Matcher M = SellersMatcher>
std::vector<Length> search(const Extractor& ex, std::u32string_view pattern, std::size_t k, SearchOptions opt = {},
                           SearchStats* stats = nullptr, const M& matcher = {})
{
    check_pattern(pattern, k);
    const Slp& slp = ex.engine().slp();
    const std::size_t n = slp.rule_count();
    const std::size_t m = pattern.size();
    SearchStats st;

    auto run = [&](std::u32string_view text) {
        ++st.matcher_calls;
        std::vector<Length> ends = matcher(pattern, text, k);
        detail::check_sorted(ends);
        return ends;
    };

    // local[v]: ends in S(v) that are neither in S(v_l) nor in the shifted S(v_r).
    std::vector<std::vector<Length>> local(n);
    std::vector<Length> count(n, 0);
    for (RuleId v = 0; v < n; ++v) {
        ++st.nodes;
        const Rule& r = slp.rule(v);
        if (r.is_terminal()) {
            const char32_t c = r.ch;
            local[v] = run(std::u32string_view(&c, 1));
        } else {
            count[v] = count[r.left] + count[r.right];
            if (opt.use_window) {
                const BoundaryWindow w = boundary_window(ex, v, m, k);
                ++st.windows;
                st.max_window = std::max<std::uint64_t>(st.max_window, w.text.size());
                const std::u32string_view text(w.text);
                const std::vector<Length> crossing = run(text);
                const std::vector<Length> inside = run(text.substr(static_cast<std::size_t>(w.left_part)));
                const Length ls = slp.size(r.left);
                auto it = inside.begin();
                for (Length e : crossing) {
                    if (e < w.left_part) continue;
                    const Length rel = e - w.left_part;  // end inside S(v_r)
                    while (it != inside.end() && *it < rel) ++it;
                    if (it != inside.end() && *it == rel) continue;
                    local[v].push_back(ls + rel);
                }
            }
        }
        count[v] += local[v].size();
        st.local_matches += local[v].size();
    }

    std::vector<Length> out;
    out.reserve(static_cast<std::size_t>(count[slp.root()]));
    struct Frame {
        RuleId v;
        Length base;
        std::uint8_t state;
        std::size_t mark;
    };
    std::vector<Frame> stack{{slp.root(), 0, 0, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (count[f.v] == 0) {
            stack.pop_back();
            continue;
        }
        const Rule& r = slp.rule(f.v);
        if (r.is_terminal()) {
            out.push_back(f.base);
            stack.pop_back();
            continue;
        }
        if (f.state == 0) {
            f.state = 1;
            const Frame next{r.left, f.base, 0, 0};
            stack.push_back(next);
        } else if (f.state == 1) {
            f.state = 2;
            f.mark = out.size();
            const Frame next{r.right, f.base + slp.size(r.left), 0, 0};
            stack.push_back(next);
        } else {
            const auto mid = static_cast<std::ptrdiff_t>(out.size());
            for (Length e : local[f.v]) out.push_back(f.base + e);
            std::inplace_merge(out.begin() + static_cast<std::ptrdiff_t>(f.mark), out.begin() + mid, out.end());
            stack.pop_back();
        }
    }
    st.occurrences = out.size();
    if (stats) *stats = st;
    return out;
}

}  // namespace slpra
