#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "slpra/slp.hpp"

namespace slpra {

enum class SlpShape {
    chain,     // each rule extends the previous one by a terminal: worst-case height
    balanced,  // FIFO pairing of terminal leaves: logarithmic height
    dag,       // random children among earlier rules, lengths capped
    doubling,  // each rule reuses the previous one twice (or a random earlier rule): huge N
};

struct RandomSlpOptions {
    std::uint64_t seed = 1;
    std::size_t rules = 100;
    std::size_t alphabet = 2;
    SlpShape shape = SlpShape::dag;
    /// Upper bound on the expansion length for the dag and doubling shapes.
    Length max_length = Length{1} << 20;
};

/// Deterministic in the options. Throws ArgumentError when rules < alphabet
/// or alphabet == 0.
inline Slp random_slp(const RandomSlpOptions& opt)
{
    if (opt.alphabet == 0 || opt.rules < opt.alphabet) {
        throw ArgumentError("random_slp needs rules >= alphabet >= 1");
    }
    std::mt19937_64 rng(opt.seed);
    auto pick = [&](std::size_t bound) {
        return static_cast<RuleId>(std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng));
    };

    std::vector<Rule> rules;
    std::vector<Length> sizes;
    rules.reserve(opt.rules);
    for (std::size_t c = 0; c < opt.alphabet; ++c) {
        rules.push_back(Rule::terminal(static_cast<char32_t>('a' + c)));
        sizes.push_back(1);
    }
    auto add = [&](RuleId l, RuleId r) {
        rules.push_back(Rule::pair(l, r));
        sizes.push_back(sizes[l] + sizes[r]);
    };
    const std::size_t sigma = opt.alphabet;

    switch (opt.shape) {
    case SlpShape::chain: {
        while (rules.size() < opt.rules) {
            const RuleId prev = static_cast<RuleId>(rules.size() - 1);
            const RuleId t = pick(sigma);
            if (rng() & 1) add(prev, t); else add(t, prev);
        }
        break;
    }
    case SlpShape::balanced: {
        // FIFO pairing over random terminal leaves yields a complete-ish tree.
        std::vector<RuleId> queue;
        const std::size_t internal = opt.rules - sigma;
        for (std::size_t i = 0; i <= internal; ++i) queue.push_back(pick(sigma));
        for (std::size_t head = 0; rules.size() < opt.rules; head += 2) {
            add(queue[head], queue[head + 1]);
            queue.push_back(static_cast<RuleId>(rules.size() - 1));
        }
        break;
    }
    case SlpShape::dag: {
        while (rules.size() < opt.rules) {
            const std::size_t m = rules.size();
            RuleId l = pick(m), r = pick(m);
            // Bias towards recent rules so expansions grow.
            if (rng() % 3 == 0) l = static_cast<RuleId>(m - 1 - pick(std::min<std::size_t>(m, 4)));
            int tries = 0;
            while (sizes[l] + sizes[r] > opt.max_length && tries++ < 32) {
                if (sizes[l] >= sizes[r]) l = pick(m); else r = pick(m);
            }
            if (sizes[l] + sizes[r] > opt.max_length) {
                l = pick(sigma);
                r = pick(sigma);
            }
            add(l, r);
        }
        break;
    }
    case SlpShape::doubling: {
        while (rules.size() < opt.rules) {
            const std::size_t m = rules.size();
            const RuleId prev = static_cast<RuleId>(m - 1);
            RuleId other = (rng() % 4 == 0) ? pick(m) : prev;
            if (sizes[prev] + sizes[other] > opt.max_length) other = pick(sigma);
            if (sizes[prev] + sizes[other] > opt.max_length) {
                add(pick(sigma), pick(sigma));
                continue;
            }
            if (rng() & 1) add(prev, other); else add(other, prev);
        }
        break;
    }
    }
    return Slp::from_rules(std::move(rules));
}

/// Terminals a and b, the pair ab, then rules that each square the previous
/// one: (ab)^(2^(depth-1)), of length 2^depth for depth >= 1.
inline Slp doubling_chain(std::uint32_t depth)
{
    std::vector<Rule> rules{Rule::terminal(U'a'), Rule::terminal(U'b'), Rule::pair(0, 1)};
    for (std::uint32_t d = 2; d <= depth; ++d) {
        const RuleId prev = static_cast<RuleId>(rules.size() - 1);
        rules.push_back(Rule::pair(prev, prev));
    }
    return Slp::from_rules(std::move(rules));
}

}  // namespace slpra
