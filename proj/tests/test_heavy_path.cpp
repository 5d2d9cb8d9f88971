#include <catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"

using namespace slpra;

TEST_CASE("abaababa heavy children are all left", "[heavy]")
{
    const Slp slp = fixtures::abaababa();
    const HeavyInfo h = decompose(slp);
    for (RuleId v = 2; v < 6; ++v) {
        CHECK(h.heavy_side[v] == Side::left);
        CHECK(h.heavy_child(slp, v) == slp.rule(v).left);
    }
}

TEST_CASE("ties pick the left child, otherwise the larger one", "[heavy]")
{
    // Child sizes: rule 2 (1,1), rule 3 (1,2), rule 4 (2,3).
    const Slp slp = parse_slp("SLPv1 5 4\n0 T 97\n1 T 98\n2 P 0 1\n3 P 0 2\n4 P 2 3\n");
    const HeavyInfo h = decompose(slp);
    CHECK(h.heavy_side[2] == Side::left);
    CHECK(h.heavy_side[3] == Side::right);
    CHECK(h.heavy_side[4] == Side::right);
    CHECK(h.light_child(slp, 4) == 2);
}

TEST_CASE("H forest of abaababa", "[heavy]")
{
    const Slp slp = fixtures::abaababa();
    const HForest f = build_forest(slp, decompose(slp));
    CHECK(heavy_path_suffix(f, 5) == std::vector<RuleId>{5, 4, 3, 2, 0});
    CHECK(f.roots == std::vector<RuleId>{0, 1});
    const std::vector<Length> right{f.right_weight[5], f.right_weight[4], f.right_weight[3], f.right_weight[2]};
    CHECK(right == std::vector<Length>{3, 2, 1, 1});
    for (RuleId v : {5u, 4u, 3u, 2u}) CHECK(f.left_weight[v] == 0);
    CHECK(f.max_depth() == 4);
}

TEST_CASE("terminal-only grammar has a single H root", "[heavy]")
{
    const Slp slp = parse_slp("SLPv1 1 0\n0 T 97\n");
    const HForest f = build_forest(slp, decompose(slp));
    CHECK(f.roots == std::vector<RuleId>{0});
    CHECK(f.parent[0] == kNoRule);
}

TEST_CASE("H roots are exactly the terminals", "[heavy]")
{
    const Slp slp = random_slp({5, 1000, 4, SlpShape::dag, Length{1} << 30});
    const HForest f = build_forest(slp, decompose(slp));
    CHECK(f.roots.size() == 4);
}

TEST_CASE("suffix metadata of abaababa", "[heavy]")
{
    const Slp slp = fixtures::abaababa();
    const SuffixMeta m = suffix_meta(slp, build_forest(slp, decompose(slp)));
    CHECK(m.z[5] == 1);
    CHECK(m.ch[5] == U'a');
    CHECK(m.z[1] == 1);
    CHECK(m.ch[1] == U'b');
}

TEST_CASE("suffix metadata with a heavy right child", "[heavy]")
{
    // 4 = aba . abaab: children sizes (3,5), right heavy.
    const Slp slp = parse_slp("SLPv1 6 5\n0 T 97\n1 T 98\n2 P 0 1\n3 P 2 0\n4 P 3 2\n5 P 3 4\n");
    const HForest f = build_forest(slp, decompose(slp));
    const SuffixMeta m = suffix_meta(slp, f);
    CHECK(m.z[5] == 1 + 3 + (m.z[4] - 1));
    const std::u32string s = expand(slp);
    CHECK(s[m.z[5] - 1] == m.ch[5]);
}

TEST_CASE("size sequences of the abaababa root suffix", "[heavy]")
{
    const Slp slp = fixtures::abaababa();
    const HForest f = build_forest(slp, decompose(slp));
    const auto suffix = heavy_path_suffix(f, 5);
    const SizeSequences seq = size_sequences(f, suffix);
    CHECK(seq.right.raw == std::vector<Length>{1, 4, 6, 7, 8});
    CHECK(seq.left.raw == std::vector<Length>{1, 1, 1, 1, 1});
    CHECK(seq.left.values == std::vector<Length>{1});
    CHECK(seq.left.idx_map == std::vector<std::uint32_t>{4});
    CHECK(seq.right.predecessor(2) == 0u);

    const auto single = size_sequences(f, heavy_path_suffix(f, 0));
    CHECK(single.left.raw == std::vector<Length>{1});
    CHECK(single.right.raw == std::vector<Length>{1});
}

TEST_CASE("size sequences of a four-node heavy path suffix", "[heavy]")
{
    // v1..v4 with left light sizes (3,0,1) and right light sizes (0,2,0):
    // S(v1) has length 7 and z = 5.
    HForest f;
    f.parent = {kNoRule, 0, 1, 2};
    f.left_weight = {0, 1, 0, 3};
    f.right_weight = {0, 0, 2, 0};
    f.depth = {0, 1, 2, 3};
    f.roots = {0};
    const std::vector<RuleId> suffix{3, 2, 1, 0};
    const SizeSequences seq = size_sequences(f, suffix);
    CHECK(seq.left.raw == std::vector<Length>{1, 4, 4, 5});
    CHECK(seq.right.raw == std::vector<Length>{1, 1, 3, 3});

    // p = 4 < z: predecessor l_2 = 4, continue in the left child of v_3 at 4 - 4 + 1.
    const auto l = seq.left.predecessor(4);
    REQUIRE(l);
    CHECK(*l == 2);
    CHECK(seq.left.raw[*l] == 4);
    CHECK(4 - seq.left.raw[*l] + 1 == 1);

    // p = 6 > z: predecessor of 7 - 6 = 1 is r_1, continue in the right child of v_2 at 6 - 5.
    const auto r = seq.right.predecessor(7 - 6);
    REQUIRE(r);
    CHECK(*r == 1);
    CHECK(seq.right.raw[*r] == 1);
}

TEST_CASE("heavy path invariants on generated grammars", "[heavy][property]")
{
    for (const Slp& slp : fixtures::grammar_zoo()) {
        const HeavyInfo heavy = decompose(slp);
        const HForest f = build_forest(slp, heavy);
        const SuffixMeta m = suffix_meta(slp, f);
        const bool small = slp.length() <= 20000;
        const std::u32string s = small ? expand(slp) : std::u32string{};
        for (RuleId v = 0; v < slp.rule_count(); ++v) {
            const auto suffix = heavy_path_suffix(f, v);
            const SizeSequences seq = size_sequences(f, suffix);
            // Left mass, right mass and the terminal itself cover S(v).
            REQUIRE(seq.left.raw.back() + seq.right.raw.back() - 1 == slp.size(v));
            REQUIRE(m.z[v] == seq.left.raw.back());
            const Rule& r = slp.rule(v);
            if (r.is_pair()) {
                const RuleId light = heavy.light_child(slp, v);
                REQUIRE(2 * slp.size(light) <= slp.size(v));
                REQUIRE(f.parent[v] < v);
            }
            if (small) {
                const std::u32string sv = expand_node(slp, v);
                REQUIRE(sv[m.z[v] - 1] == m.ch[v]);
            }
        }
    }
}
