#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slpra/error.hpp"

namespace slpra {

using RuleId = std::uint32_t;
using Length = std::uint64_t;

inline constexpr RuleId kNoRule = std::numeric_limits<RuleId>::max();

/// Expansions longer than this are refused by the expansion oracle unless
/// the caller raises the cap.
inline constexpr Length kDefaultOracleCap = Length{1} << 24;

/// One SLP rule: a terminal character or the concatenation of two earlier rules.
struct Rule {
    enum class Kind : std::uint8_t { terminal, pair };

    Kind kind = Kind::terminal;
    char32_t ch = 0;
    RuleId left = kNoRule;
    RuleId right = kNoRule;

    static constexpr Rule terminal(char32_t c) { return Rule{Kind::terminal, c, kNoRule, kNoRule}; }
    static constexpr Rule pair(RuleId l, RuleId r) { return Rule{Kind::pair, 0, l, r}; }

    constexpr bool is_terminal() const { return kind == Kind::terminal; }
    constexpr bool is_pair() const { return kind == Kind::pair; }

    friend constexpr bool operator==(const Rule&, const Rule&) = default;
};

/// Expansion lengths computed in one pass over topologically ordered rules.
/// Throws ParseError on a forward reference or on 64-bit overflow.
inline std::vector<Length> compute_sizes(std::span<const Rule> rules)
{
    std::vector<Length> sizes(rules.size());
    for (std::size_t v = 0; v < rules.size(); ++v) {
        const Rule& r = rules[v];
        if (r.is_terminal()) {
            sizes[v] = 1;
            continue;
        }
        if (r.left >= v || r.right >= v) {
            throw ParseError("rule " + std::to_string(v) + ": forward reference");
        }
        const Length a = sizes[r.left];
        const Length b = sizes[r.right];
        if (a > std::numeric_limits<Length>::max() - b) {
            throw ParseError("rule " + std::to_string(v) + ": expansion length overflows 64 bits");
        }
        sizes[v] = a + b;
    }
    return sizes;
}

/// A validated straight-line program. Immutable after construction; the
/// root is always the last rule.
class Slp {
public:
    Slp() = default;

    /// Validates the rules (topological order, no overflow) and computes sizes.
    static Slp from_rules(std::vector<Rule> rules)
    {
        if (rules.empty()) {
            throw ParseError("grammar has no rules");
        }
        for (std::size_t v = 0; v < rules.size(); ++v) {
            if (rules[v].is_terminal() && !valid_code_point(rules[v].ch)) {
                throw ParseError("rule " + std::to_string(v) + ": invalid code point");
            }
        }
        Slp s;
        s.sizes_ = compute_sizes(rules);
        s.rules_ = std::move(rules);
        return s;
    }

    /// Skips validation. Used to inject faults when testing verifiers.
    static Slp from_parts_unchecked(std::vector<Rule> rules, std::vector<Length> sizes)
    {
        Slp s;
        s.rules_ = std::move(rules);
        s.sizes_ = std::move(sizes);
        return s;
    }

    std::span<const Rule> rules() const { return rules_; }
    const Rule& rule(RuleId v) const { return rules_[v]; }
    std::span<const Length> sizes() const { return sizes_; }
    Length size(RuleId v) const { return sizes_[v]; }

    std::size_t rule_count() const { return rules_.size(); }
    RuleId root() const { return static_cast<RuleId>(rules_.size() - 1); }
    Length length() const { return sizes_.back(); }
    bool empty() const { return rules_.empty(); }

    static constexpr bool valid_code_point(char32_t c)
    {
        return c <= 0x10FFFF && (c < 0xD800 || c > 0xDFFF);
    }

private:
    std::vector<Rule> rules_;
    std::vector<Length> sizes_;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s)
{
    Int value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

}  // namespace detail

/// Parses an `SLPv1` document. '#' starts a comment; blank lines are ignored.
inline Slp parse_slp(std::string_view text)
{
    std::vector<Rule> rules;
    std::optional<std::size_t> declared;
    RuleId root = 0;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError("line " + std::to_string(line_no) + ": " + what);
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto tok = detail::split_ws(line);

        if (!declared) {
            if (tok.size() != 3 || tok[0] != "SLPv1") {
                throw fail("malformed header, expected `SLPv1 <n> <root-id>`");
            }
            const auto n = detail::parse_int<std::uint64_t>(tok[1]);
            const auto r = detail::parse_int<std::uint64_t>(tok[2]);
            if (!n || !r || *n == 0 || *n > std::numeric_limits<RuleId>::max()) {
                throw fail("malformed header");
            }
            if (*r >= *n) {
                throw fail("missing root: root id " + std::to_string(*r) + " is not a rule");
            }
            if (*r != *n - 1) {
                throw fail("root must be the last rule");
            }
            declared = static_cast<std::size_t>(*n);
            root = static_cast<RuleId>(*r);
            rules.reserve(*declared);
            continue;
        }

        if (tok.size() < 3) {
            throw fail("malformed rule line");
        }
        const auto id = detail::parse_int<std::uint64_t>(tok[0]);
        if (!id) {
            throw fail("malformed rule id");
        }
        if (*id < rules.size()) {
            throw fail("duplicate id " + std::to_string(*id));
        }
        if (*id != rules.size() || rules.size() >= *declared) {
            throw fail("unexpected id " + std::to_string(*id) + ", ids must ascend from 0 to n-1");
        }
        if (tok[1] == "T" && tok.size() == 3) {
            const auto cp = detail::parse_int<std::uint32_t>(tok[2]);
            if (!cp || !Slp::valid_code_point(static_cast<char32_t>(*cp))) {
                throw fail("invalid code point");
            }
            rules.push_back(Rule::terminal(static_cast<char32_t>(*cp)));
        } else if (tok[1] == "P" && tok.size() == 4) {
            const auto l = detail::parse_int<std::uint64_t>(tok[2]);
            const auto r = detail::parse_int<std::uint64_t>(tok[3]);
            if (!l || !r) {
                throw fail("malformed child id");
            }
            if (*l >= *id || *r >= *id) {
                throw fail("forward reference in rule " + std::to_string(*id));
            }
            rules.push_back(Rule::pair(static_cast<RuleId>(*l), static_cast<RuleId>(*r)));
        } else {
            throw fail("malformed rule line");
        }
    }

    if (!declared) {
        throw ParseError("missing `SLPv1` header");
    }
    if (rules.size() != *declared) {
        throw ParseError("expected " + std::to_string(*declared) + " rules, found " + std::to_string(rules.size()));
    }
    (void)root;
    return Slp::from_rules(std::move(rules));
}

inline std::string serialize_slp(const Slp& slp)
{
    std::string out;
    out.reserve(16 * slp.rule_count() + 32);
    out += "SLPv1 " + std::to_string(slp.rule_count()) + " " + std::to_string(slp.root()) + "\n";
    const auto rules = slp.rules();
    for (std::size_t v = 0; v < rules.size(); ++v) {
        out += std::to_string(v);
        if (rules[v].is_terminal()) {
            out += " T ";
            out += std::to_string(static_cast<std::uint32_t>(rules[v].ch));
        } else {
            out += " P ";
            out += std::to_string(rules[v].left);
            out += ' ';
            out += std::to_string(rules[v].right);
        }
        out += '\n';
    }
    return out;
}

/// S(v), the expansion of rule v. Refuses expansions longer than `cap`.
inline std::u32string expand_node(const Slp& slp, RuleId v, Length cap = kDefaultOracleCap)
{
    if (v >= slp.rule_count()) {
        throw RangeError("rule id out of range");
    }
    if (slp.size(v) > cap) {
        throw RangeError("expansion of length " + std::to_string(slp.size(v)) + " exceeds the oracle cap");
    }
    std::u32string out;
    out.reserve(static_cast<std::size_t>(slp.size(v)));
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
    return out;
}

inline std::u32string expand(const Slp& slp, Length cap = kDefaultOracleCap)
{
    return expand_node(slp, slp.root(), cap);
}

/// Top-down descent using stored sizes only; O(parse-tree height).
/// `rule_visits`, when given, receives the number of rules visited.
inline char32_t naive_access(const Slp& slp, Length i, std::uint64_t* rule_visits = nullptr)
{
    if (i >= slp.length()) {
        throw RangeError("index " + std::to_string(i) + " out of range for length " + std::to_string(slp.length()));
    }
    RuleId v = slp.root();
    std::uint64_t visits = 1;
    while (slp.rule(v).is_pair()) {
        const Rule& r = slp.rule(v);
        const Length left = slp.size(r.left);
        if (i < left) {
            v = r.left;
        } else {
            i -= left;
            v = r.right;
        }
        ++visits;
    }
    if (rule_visits) *rule_visits = visits;
    return slp.rule(v).ch;
}

/// Parse-tree height per rule (terminals have height 0).
inline std::vector<std::uint32_t> rule_heights(const Slp& slp)
{
    std::vector<std::uint32_t> h(slp.rule_count(), 0);
    for (std::size_t v = 0; v < slp.rule_count(); ++v) {
        const Rule& r = slp.rule(static_cast<RuleId>(v));
        if (r.is_pair()) h[v] = 1 + std::max(h[r.left], h[r.right]);
    }
    return h;
}

inline std::uint32_t height(const Slp& slp) { return rule_heights(slp).back(); }

}  // namespace slpra
