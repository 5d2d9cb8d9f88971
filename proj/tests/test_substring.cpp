#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"

using namespace slpra;

TEST_CASE("right light children along the abaababa path", "[substring]")
{
    const Engine e(fixtures::abaababa());
    const Extractor ex(e);
    CHECK(ex.hanging(5, Side::right) == std::vector<RuleId>{3, 2, 0, 1});
    CHECK(ex.links().next_right[0] == kNoRule);
    CHECK(ex.links().next_right[5] == 4);
    CHECK(ex.links().next_right[3] == 2);
    CHECK(ex.links().next_right[2] == kNoRule);
    CHECK(ex.links().tail[5] == 0);
    CHECK(ex.hanging(5, Side::left).empty());
    for (RuleId v = 0; v < 6; ++v) CHECK(ex.links().next_left[v] == kNoRule);
}

TEST_CASE("abaababa slices", "[substring]")
{
    const Engine e(fixtures::abaababa());
    const Extractor ex(e);
    ExtractStats st;
    CHECK(ex.extract(2, 5, &st) == U"aab");
    CHECK(st.accesses == 2);
    CHECK(st.decoded_chars == 3);
    CHECK(ex.extract(3, 3).empty());
    CHECK(ex.extract(0, 8) == U"abaababa");
    CHECK(ex.plan(0, 8).lca == 5);
    CHECK_THROWS_AS(ex.extract(5, 9), RangeError);
    CHECK_THROWS_AS(ex.extract(5, 4), RangeError);
}

TEST_CASE("lca of the abaababa span [2,5)", "[substring]")
{
    const Slp slp = fixtures::abaababa();
    const Engine e(slp);
    const Extractor ex(e);
    const LcaResult r = ex.lca_of_paths(2, 5);
    const std::u32string s = expand(slp);
    const std::u32string sub = expand_node(slp, r.node);
    // The span lies inside S(node), which occurs in S at offset 2 - r.i.
    CHECK(r.j - r.i == 3);
    CHECK(sub.substr(r.i, 3) == U"aab");
    CHECK(s.substr(2 - r.i, sub.size()) == sub);
}

TEST_CASE("a single character is one leaf", "[substring]")
{
    const Engine e(fixtures::abaababa());
    const Extractor ex(e);
    for (Length i = 0; i < 8; ++i) {
        const SpanPlan p = ex.plan(i, i + 1);
        REQUIRE(p.pieces.size() == 1);
        CHECK(e.slp().rule(p.pieces[0]).is_terminal());
        CHECK(p.lca == p.pieces[0]);
    }
}

TEST_CASE("extraction equals the oracle and decodes exactly j - i", "[substring][property]")
{
    std::mt19937_64 rng(12);
    for (const Slp& slp : fixtures::grammar_zoo()) {
        const std::u32string s = expand(slp);
        for (int levels : {0, 2}) {
            const Engine e(slp, {EngineKind::biased, levels});
            const Extractor ex(e);
            for (int q = 0; q < 300; ++q) {
                Length i = rng() % (s.size() + 1), j = rng() % (s.size() + 1);
                if (i > j) std::swap(i, j);
                ExtractStats st;
                REQUIRE(ex.extract(i, j, &st) == s.substr(i, j - i));
                REQUIRE(st.decoded_chars == j - i);
                if (i == j) continue;
                REQUIRE(st.accesses == 2);
                const SpanPlan p = ex.plan(i, j);
                Length covered = 0;
                for (RuleId piece : p.pieces) covered += slp.size(piece);
                REQUIRE(covered == j - i);
                REQUIRE(p.lca_start <= i);
                REQUIRE(j - p.lca_start <= slp.size(p.lca));
            }
        }
    }
}

TEST_CASE("link enumeration equals a plain parent walk", "[substring][property]")
{
    std::mt19937_64 rng(13);
    for (const Slp& slp : fixtures::grammar_zoo()) {
        const Engine e(slp);
        const Extractor ex(e);
        for (RuleId v = 0; v < slp.rule_count(); ++v) {
            for (Side side : {Side::left, Side::right}) REQUIRE(ex.hanging(v, side) == ex.hanging(v, side, true));
        }
        for (int q = 0; q < 100; ++q) {
            Length i = rng() % slp.length(), j = rng() % slp.length() + 1;
            if (i >= j) std::swap(i, j);
            if (i == j) continue;
            REQUIRE(ex.plan(i, j).pieces == ex.plan(i, j, true).pieces);
        }
    }
}

TEST_CASE("extraction inside a rule", "[substring]")
{
    const Slp slp = fixtures::abaababa();
    const Engine e(slp);
    const Extractor ex(e);
    for (RuleId v = 0; v < slp.rule_count(); ++v) {
        const std::u32string sv = expand_node(slp, v);
        for (Length i = 0; i <= sv.size(); ++i) {
            for (Length j = i; j <= sv.size(); ++j) REQUIRE(ex.extract_node(v, i, j) == sv.substr(i, j - i));
        }
    }
}
