#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace slpra;

namespace {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({diag + (a[i - 1] == b[j - 1] ? 0 : 1), up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[b.size()];
}

// Every substring ending at e, checked directly.
struct ExhaustiveMatcher {
    std::vector<Length> operator()(std::u32string_view p, std::u32string_view t, std::size_t k) const
    {
        std::vector<Length> ends;
        for (std::size_t e = 0; e < t.size(); ++e) {
            bool hit = false;
            for (std::size_t b = 0; b <= e && !hit; ++b) hit = edit_distance(p, t.substr(b, e - b + 1)) <= k;
            if (hit) ends.push_back(e);
        }
        return ends;
    }
};

std::u32string random_pattern(std::mt19937_64& rng, std::size_t m, std::size_t sigma)
{
    std::u32string p;
    for (std::size_t i = 0; i < m; ++i) p.push_back(U'a' + static_cast<char32_t>(rng() % sigma));
    return p;
}

}  // namespace

TEST_CASE("Sellers on small texts", "[approx]")
{
    CHECK(sellers_match(U"ab", U"abaababa", 0) == std::vector<Length>{1, 4, 6});
    CHECK(sellers_match(U"ab", U"b", 1) == std::vector<Length>{0});
    CHECK(sellers_match(U"z", U"abab", 0).empty());
    CHECK_THROWS_AS(sellers_match(U"", U"abab", 0), ArgumentError);
    CHECK_THROWS_AS(sellers_match(U"ab", U"abab", 2), ArgumentError);
}

TEST_CASE("Sellers equals the exhaustive matcher", "[approx][property]")
{
    std::mt19937_64 rng(21);
    const ExhaustiveMatcher slow;
    for (int trial = 0; trial < 300; ++trial) {
        const std::u32string t = random_pattern(rng, 1 + rng() % 30, 3);
        const std::size_t m = 1 + rng() % 6;
        const std::u32string p = random_pattern(rng, m, 3);
        const std::size_t k = rng() % m;
        REQUIRE(sellers_match(p, t, k) == slow(p, t, k));
    }
}

TEST_CASE("boundary windows", "[approx]")
{
    const Slp slp = fixtures::abaababa();
    const Engine e(slp);
    const Extractor ex(e);
    const BoundaryWindow w = boundary_window(ex, 5, 2, 0);
    CHECK(w.text == U"abab");
    CHECK(w.offset == 3);
    CHECK(w.left_part == 2);

    // Rule 2 = a . b: both children shorter than m + k.
    const BoundaryWindow tiny = boundary_window(ex, 2, 2, 1);
    CHECK(tiny.text == U"ab");
    CHECK(tiny.offset == 0);
    CHECK(tiny.left_part == 1);

    const BoundaryWindow whole = boundary_window(ex, 5, 6, 2);
    CHECK(whole.text == U"abaababa");
    CHECK_THROWS_AS(boundary_window(ex, 0, 2, 0), ArgumentError);
}

TEST_CASE("search on abaababa", "[approx]")
{
    const Engine e(fixtures::abaababa());
    const Extractor ex(e);
    SearchStats st;
    CHECK(search(ex, U"ab", 0, {}, &st) == std::vector<Length>{1, 4, 6});
    CHECK(st.max_window <= 2 * (2 + 0));
    CHECK(st.occurrences == 3);
    CHECK(search(ex, U"abaababa", 0) == std::vector<Length>{7});
    CHECK(search(ex, U"zz", 1).empty());
    CHECK_THROWS_AS(search(ex, U"ab", 2), ArgumentError);
}

TEST_CASE("search equals Sellers on the expansion", "[approx][property]")
{
    std::mt19937_64 rng(31);
    for (const Slp& slp : fixtures::grammar_zoo(3, 300, 4000)) {
        const std::u32string s = expand(slp);
        const Engine e(slp);
        const Extractor ex(e);
        for (int q = 0; q < 8; ++q) {
            const std::size_t m = 1 + rng() % 12;
            const std::size_t k = std::min<std::size_t>(rng() % 4, m - 1);
            std::u32string p = random_pattern(rng, m, 3);
            if (q % 2 == 0 && s.size() >= m) {
                const std::size_t at = rng() % (s.size() - m + 1);
                p = s.substr(at, m);
                if (m > 1) p[rng() % m] = U'a';
            }
            SearchStats st;
            REQUIRE(search(ex, p, k, {}, &st) == sellers_match(p, s, k));
            REQUIRE(st.max_window <= 2 * (m + k));
        }
        REQUIRE(search(ex, s.substr(0, std::min<std::size_t>(s.size(), 12)), 0).size() >= 1);
    }
}

TEST_CASE("whole-string self match", "[approx]")
{
    for (const Slp& slp : fixtures::grammar_zoo(2, 60, 40)) {
        const std::u32string s = expand(slp);
        const Engine e(slp);
        const Extractor ex(e);
        const auto ends = search(ex, s, 0);
        REQUIRE(!ends.empty());
        CHECK(ends.back() == s.size() - 1);
    }
}

TEST_CASE("a pluggable matcher gives the same answers", "[approx]")
{
    std::mt19937_64 rng(41);
    const Slp slp = random_slp({2, 60, 2, SlpShape::dag, 300});
    const std::u32string s = expand(slp);
    const Engine e(slp);
    const Extractor ex(e);
    for (int q = 0; q < 20; ++q) {
        const std::size_t m = 2 + rng() % 4;
        const std::u32string p = random_pattern(rng, m, 2);
        const std::size_t k = rng() % m;
        REQUIRE(search(ex, p, k, {}, nullptr, ExhaustiveMatcher{}) == sellers_match(p, s, k));
    }
}

TEST_CASE("every node-local end is a true occurrence", "[approx][property]")
{
    // Occurrences of S(v) are the ones reported when searching from v as the root.
    std::mt19937_64 rng(51);
    for (const Slp& slp : fixtures::grammar_zoo(2, 200, 3000)) {
        const std::size_t m = 3;
        const std::u32string p = random_pattern(rng, m, 2);
        for (RuleId v = 0; v < slp.rule_count(); v += 1 + slp.rule_count() / 25) {
            std::vector<Rule> rules(slp.rules().begin(), slp.rules().begin() + v + 1);
            const Slp sub = Slp::from_rules(std::move(rules));
            const Engine e(sub);
            const Extractor ex(e);
            REQUIRE(search(ex, p, 1) == sellers_match(p, expand(sub), 1));
        }
    }
}

TEST_CASE("skipping the boundary windows loses occurrences", "[approx]")
{
    const Engine e(fixtures::abaababa());
    const Extractor ex(e);
    SearchOptions off;
    off.use_window = false;
    const auto broken = search(ex, U"ab", 0, off);
    CHECK(broken != std::vector<Length>{1, 4, 6});
    CHECK(broken.empty());
}
