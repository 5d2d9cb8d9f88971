#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace slpra;

namespace {

SuiteStatus status_of(const std::vector<SuiteResult>& rs, const std::string& name)
{
    for (const auto& r : rs) {
        if (r.name == name) return r.status;
    }
    FAIL("no suite named " << name);
    return SuiteStatus::fail;
}

}  // namespace

TEST_CASE("abaababa passes every suite", "[verify]")
{
    const auto rs = verify(fixtures::abaababa());
    REQUIRE(rs.size() == 7);
    for (const auto& r : rs) CHECK(r.status == SuiteStatus::pass);
}

TEST_CASE("corrupted sizes fail by name", "[verify]")
{
    const Slp good = fixtures::abaababa();
    std::vector<Length> sizes(good.sizes().begin(), good.sizes().end());
    sizes[3] = 4;
    const Slp bad = Slp::from_parts_unchecked(std::vector<Rule>(good.rules().begin(), good.rules().end()), sizes);
    const auto rs = verify(bad);
    CHECK(rs[0].name == "sizes");
    CHECK(rs[0].status == SuiteStatus::fail);
    CHECK(rs[0].detail.find("rule 3") != std::string::npos);
    for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].status == SuiteStatus::skip);
}

TEST_CASE("long strings skip the oracle but cross-check engines", "[verify]")
{
    VerifyOptions opt;
    opt.oracle_cap = 1000;
    opt.samples = 300;
    const auto rs = verify(doubling_chain(30), opt);
    CHECK(status_of(rs, "oracle") == SuiteStatus::skip);
    CHECK(status_of(rs, "engines") == SuiteStatus::pass);
    CHECK(status_of(rs, "light-edges") == SuiteStatus::pass);
    CHECK(status_of(rs, "ibst-depth") == SuiteStatus::pass);
}

TEST_CASE("generated grammars pass every suite", "[verify][property]")
{
    VerifyOptions opt;
    opt.samples = 200;
    for (const Slp& slp : fixtures::grammar_zoo(2, 300)) {
        for (int levels = 0; levels <= 2; ++levels) {
            opt.levels = levels;
            for (const auto& r : verify(slp, opt)) {
                INFO(r.name << ": " << r.detail);
                CHECK(r.status == SuiteStatus::pass);
            }
        }
    }
}

TEST_CASE("depth and light-edge bounds", "[verify]")
{
    CHECK(ibst_depth_bound(16, 1) == 5);
    CHECK(ibst_depth_bound(7, 4) == 1);
    CHECK(ibst_depth_bound(7, 2) == 2);
    CHECK(ibst_depth_bound(7, 1) == 3);
    CHECK(light_edge_bound(8) == 4);
    CHECK(light_edge_bound(Length{1} << 40) == 41);
}
