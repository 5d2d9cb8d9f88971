#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"

using namespace slpra;

namespace {

std::size_t scan(const std::vector<Length>& b, Length p)
{
    std::size_t i = 0;
    while (i + 2 < b.size() && b[i + 1] <= p) ++i;
    return i;
}

std::vector<Length> random_boundaries(std::mt19937_64& rng, std::size_t intervals, Length start)
{
    std::vector<Length> b{start};
    for (std::size_t i = 0; i < intervals; ++i) {
        const Length step = rng() % 5 == 0 ? 1 + rng() % 200 : 1 + rng() % 3;
        b.push_back(b.back() + step);
    }
    return b;
}

}  // namespace

TEST_CASE("interval-biased tree over (0,4,5,7)", "[ibst]")
{
    const std::vector<Length> b{0, 4, 5, 7};
    const IntervalBiasedTree t(b);
    CHECK(t.interval_count() == 3);
    CHECK(t.root() == 0);
    CHECK(t.left(0) == IntervalBiasedTree::kNil);
    CHECK(t.right(0) == 2);
    CHECK(t.left(2) == 1);
    CHECK(t.depth(0) == 1);
    CHECK(t.depth(2) == 2);
    CHECK(t.depth(1) == 3);

    const auto h = t.predecessor(6);
    CHECK(h.index == 2);
    CHECK(h.value == 5);
    CHECK(t.predecessor(0).index == 0);
    CHECK(t.predecessor(0).value == 0);
    CHECK(t.predecessor(7).index == 2);
    CHECK(t.predecessor(7).value == 5);
    CHECK_THROWS_AS(t.predecessor(8), RangeError);
}

TEST_CASE("predecessor_from starts at the lca with the last interval", "[ibst]")
{
    const std::vector<Length> b{0, 4, 5, 7};
    const IntervalBiasedTree t(b);
    CHECK(t.lca_with_last(1) == 2);
    const auto h = t.predecessor_from(1, 6);
    CHECK(h.index == 2);
    CHECK(h.value == 5);
    CHECK(h.visits == 1);
    CHECK_FALSE(h.fallback);

    const auto last = t.predecessor_from(2, 5);
    CHECK(last.index == 2);
    CHECK(last.visits == 1);

    for (Length p = 0; p <= 7; ++p) {
        const auto a = t.predecessor(p);
        const auto c = t.predecessor_from(0, p);
        CHECK(a.index == c.index);
        CHECK(a.visits == c.visits);
    }

    const auto miss = t.predecessor_from(2, 1);
    CHECK(miss.fallback);
    CHECK(miss.index == 0);
}

TEST_CASE("single interval and unit intervals", "[ibst]")
{
    const std::vector<Length> one{0, 100};
    const IntervalBiasedTree a(one);
    CHECK(a.interval_count() == 1);
    CHECK(a.root() == 0);
    CHECK(a.predecessor(57).visits == 1);

    std::vector<Length> unit(17);
    for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = i;
    const IntervalBiasedTree b(unit);
    std::uint32_t deepest = 0;
    for (std::size_t i = 0; i < b.interval_count(); ++i) deepest = std::max(deepest, b.depth(i));
    CHECK(deepest <= 5);
}

TEST_CASE("boundaries must increase", "[ibst]")
{
    const std::vector<Length> flat{0, 3, 3, 5};
    CHECK_THROWS_AS(IntervalBiasedTree(flat), ArgumentError);
}

TEST_CASE("predecessor equals a linear scan and depth stays biased", "[ibst][property]")
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = random_boundaries(rng, 1 + rng() % 300, rng() % 50);
        IbstBuildStats stats;
        const IntervalBiasedTree t(b, &stats);
        const std::size_t m = t.interval_count();
        REQUIRE(stats.search_steps <= 4 * m);
        REQUIRE(ibst_depth_violation(t) == -1);
        for (Length p = b.front(); p <= b.back(); ++p) {
            const auto h = t.predecessor(p);
            REQUIRE(h.index == scan(b, p));
            REQUIRE(h.visits <= ibst_depth_bound(t.universe(), b[h.index + 1] - b[h.index]));
            const std::size_t k = rng() % m;
            const auto f = t.predecessor_from(k, p);
            REQUIRE(f.index == h.index);
            REQUIRE(f.fallback == (p < b[k]));
        }
    }
}

TEST_CASE("pooled trees answer independently", "[ibst]")
{
    std::mt19937_64 rng(9);
    IbstPool pool;
    std::vector<std::vector<Length>> sets;
    for (int i = 0; i < 20; ++i) {
        sets.push_back(random_boundaries(rng, 1 + rng() % 40, rng() % 10));
        pool.add(sets.back());
    }
    for (std::size_t t = 0; t < sets.size(); ++t) {
        const IbstView v(pool, static_cast<IbstPool::TreeId>(t));
        for (Length p = sets[t].front(); p <= sets[t].back(); ++p) REQUIRE(v.predecessor(p).index == scan(sets[t], p));
    }
}

TEST_CASE("dot dump names every interval", "[ibst]")
{
    const std::vector<Length> b{0, 4, 5, 7};
    const std::string dot = IntervalBiasedTree(b).to_dot("t");
    CHECK(dot.rfind("digraph t {", 0) == 0);
    CHECK(dot.find("[0,4)") != std::string::npos);
    CHECK(dot.find("n2 -> n1") != std::string::npos);
}
