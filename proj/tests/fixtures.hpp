#pragma once

#include <random>
#include <string>
#include <vector>

#include "slpra.hpp"

namespace fixtures {

inline constexpr const char* kAbaababa =
    "SLPv1 6 5\n"
    "0 T 97\n"
    "1 T 98\n"
    "2 P 0 1\n"
    "3 P 2 0\n"
    "4 P 3 2\n"
    "5 P 4 3\n";

inline slpra::Slp abaababa() { return slpra::parse_slp(kAbaababa); }

inline std::u32string u32(const std::string& s) { return slpra::decode_latin1(s); }

/// Chain, balanced, random DAG, doubling and Re-Pair grammars of modest size.
inline std::vector<slpra::Slp> grammar_zoo(std::size_t per_shape = 4, std::size_t max_rules = 600,
                                           slpra::Length max_length = 20000)
{
    using namespace slpra;
    std::vector<Slp> out;
    out.push_back(abaababa());
    for (std::size_t s = 0; s < per_shape; ++s) {
        const std::size_t rules = 8 + (max_rules - 8) * (s + 1) / per_shape;
        for (SlpShape shape : {SlpShape::chain, SlpShape::balanced, SlpShape::dag, SlpShape::doubling}) {
            RandomSlpOptions o;
            o.seed = 100 + s;
            o.rules = rules;
            o.alphabet = 1 + s % 4;
            o.shape = shape;
            o.max_length = max_length;
            out.push_back(random_slp(o));
        }
        std::mt19937_64 rng(200 + s);
        std::u32string text;
        const std::size_t len = 50 + (max_length / 4) * (s + 1) / per_shape;
        for (std::size_t i = 0; i < len; ++i) text.push_back(U'a' + static_cast<char32_t>(rng() % (2 + s)));
        out.push_back(build_grammar(text));
    }
    return out;
}

}  // namespace fixtures
