#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <string_view>
#include <vector>

#include "slpra/slp.hpp"

namespace slpra {

namespace detail {

/// Open-addressing map from a symbol pair to its adjacency count and the
/// head of its occurrence list. Linear probing with backward-shift deletion.
class PairTable {
public:
    struct Slot {
        std::uint64_t key = kEmpty;
        std::uint32_t count = 0;
        std::uint32_t head = 0;
    };
    static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

    explicit PairTable(std::size_t expected = 1024)
    {
        std::size_t cap = 1024;
        while (cap < 2 * expected) cap <<= 1;
        slots_.assign(cap, Slot{});
    }

    Slot* find(std::uint64_t key)
    {
        for (std::size_t i = bucket(key);; i = (i + 1) & mask()) {
            if (slots_[i].key == key) return &slots_[i];
            if (slots_[i].key == kEmpty) return nullptr;
        }
    }

    Slot& get_or_insert(std::uint64_t key, std::uint32_t empty_head)
    {
        if (2 * (size_ + 1) > slots_.size()) grow();
        std::size_t i = bucket(key);
        for (; slots_[i].key != kEmpty; i = (i + 1) & mask()) {
            if (slots_[i].key == key) return slots_[i];
        }
        slots_[i] = Slot{key, 0, empty_head};
        ++size_;
        return slots_[i];
    }

    void erase(std::uint64_t key)
    {
        std::size_t i = bucket(key);
        while (slots_[i].key != key) {
            if (slots_[i].key == kEmpty) return;
            i = (i + 1) & mask();
        }
        std::size_t hole = i;
        for (std::size_t j = (hole + 1) & mask(); slots_[j].key != kEmpty; j = (j + 1) & mask()) {
            const std::size_t home = bucket(slots_[j].key);
            // Move j into the hole unless its home lies cyclically in (hole, j].
            const bool stays = hole <= j ? (home > hole && home <= j) : (home > hole || home <= j);
            if (!stays) {
                slots_[hole] = slots_[j];
                hole = j;
            }
        }
        slots_[hole] = Slot{};
        --size_;
    }

private:
    std::size_t mask() const { return slots_.size() - 1; }
    std::size_t bucket(std::uint64_t key) const
    {
        key ^= key >> 33;
        key *= 0xff51afd7ed558ccdULL;
        key ^= key >> 33;
        return static_cast<std::size_t>(key) & mask();
    }
    void grow()
    {
        std::vector<Slot> old(slots_.size() * 2);
        old.swap(slots_);
        size_ = 0;
        for (const Slot& s : old) {
            if (s.key == kEmpty) continue;
            std::size_t i = bucket(s.key);
            while (slots_[i].key != kEmpty) i = (i + 1) & mask();
            slots_[i] = s;
            ++size_;
        }
    }

    std::vector<Slot> slots_;
    std::size_t size_ = 0;
};

}  // namespace detail

/// Re-Pair style grammar construction: repeatedly replaces a most frequent
/// adjacent pair by a fresh rule until no pair occurs twice, then pairs up the
/// remaining sequence level by level. Terminals get ids in code point order.
inline Slp build_grammar(std::u32string_view text)
{
    if (text.empty()) {
        throw ArgumentError("cannot build a grammar for empty input");
    }
    if (text.size() >= std::numeric_limits<std::uint32_t>::max() / 2) {
        throw ArgumentError("input too long");
    }
    using Sym = std::uint32_t;
    constexpr Sym kNil = std::numeric_limits<Sym>::max();
    const std::size_t n = text.size();

    std::map<char32_t, Sym> alphabet;
    for (char32_t c : text) alphabet.emplace(c, 0);
    std::vector<Rule> rules;
    for (auto& [c, id] : alphabet) {
        id = static_cast<Sym>(rules.size());
        rules.push_back(Rule::terminal(c));
    }

    std::vector<Sym> sym(n), nxt(n), prv(n), occ_next(n, kNil), occ_prev(n, kNil);
    for (std::size_t i = 0; i < n; ++i) {
        sym[i] = alphabet[text[i]];
        nxt[i] = i + 1 < n ? static_cast<Sym>(i + 1) : kNil;
        prv[i] = i > 0 ? static_cast<Sym>(i - 1) : kNil;
    }

    auto key_of = [](Sym a, Sym b) { return (std::uint64_t{a} << 32) | b; };
    detail::PairTable table(std::min<std::size_t>(n, 1u << 20));
    using Entry = std::pair<std::uint32_t, std::uint64_t>;  // (count, key)
    std::priority_queue<Entry> heap;

    auto link = [&](Sym pos) {
        const std::uint64_t key = key_of(sym[pos], sym[nxt[pos]]);
        auto& slot = table.get_or_insert(key, kNil);
        occ_prev[pos] = kNil;
        occ_next[pos] = slot.head;
        if (slot.head != kNil) occ_prev[slot.head] = pos;
        slot.head = pos;
        if (++slot.count >= 2) heap.emplace(slot.count, key);
    };
    auto unlink = [&](Sym pos) {
        const std::uint64_t key = key_of(sym[pos], sym[nxt[pos]]);
        auto* slot = table.find(key);
        if (occ_prev[pos] != kNil) {
            occ_next[occ_prev[pos]] = occ_next[pos];
        } else {
            slot->head = occ_next[pos];
        }
        if (occ_next[pos] != kNil) occ_prev[occ_next[pos]] = occ_prev[pos];
        occ_next[pos] = occ_prev[pos] = kNil;
        if (--slot->count == 0) table.erase(key);
    };

    for (std::size_t i = 0; i + 1 < n; ++i) link(static_cast<Sym>(i));

    std::vector<Sym> occurrences;
    while (!heap.empty()) {
        const auto [count, key] = heap.top();
        heap.pop();
        auto* slot = table.find(key);
        if (!slot || slot->count != count) {
            if (slot && slot->count < count && slot->count >= 2) heap.emplace(slot->count, key);
            continue;
        }
        const Sym a = static_cast<Sym>(key >> 32);
        const Sym b = static_cast<Sym>(key & 0xFFFFFFFFu);

        occurrences.clear();
        for (Sym p = slot->head; p != kNil; p = occ_next[p]) occurrences.push_back(p);
        std::sort(occurrences.begin(), occurrences.end());
        if (a == b) {
            // Runs overlap; count the non-overlapping occurrences a greedy
            // left-to-right replacement would produce.
            std::size_t usable = 0;
            Sym last = kNil;
            for (Sym p : occurrences) {
                if (last != kNil && p == nxt[last]) continue;
                ++usable;
                last = p;
            }
            if (usable < 2) continue;
        }

        const Sym x = static_cast<Sym>(rules.size());
        rules.push_back(Rule::pair(a, b));
        for (Sym p : occurrences) {
            if (sym[p] != a || nxt[p] == kNil || sym[nxt[p]] != b) continue;
            const Sym q = nxt[p];
            const Sym left = prv[p];
            const Sym right = nxt[q];
            if (left != kNil) unlink(left);
            unlink(p);
            if (right != kNil) unlink(q);
            sym[p] = x;
            sym[q] = kNil;
            nxt[p] = right;
            if (right != kNil) prv[right] = p;
            if (left != kNil) link(left);
            if (right != kNil) link(p);
        }
    }

    std::vector<Sym> rest;
    for (Sym p = 0; p != kNil; p = nxt[p]) rest.push_back(sym[p]);
    while (rest.size() > 1) {
        std::size_t w = 0;
        for (std::size_t i = 0; i + 1 < rest.size(); i += 2) {
            rules.push_back(Rule::pair(rest[i], rest[i + 1]));
            rest[w++] = static_cast<Sym>(rules.size() - 1);
        }
        if (rest.size() % 2 == 1) rest[w++] = rest.back();
        rest.resize(w);
    }
    return Slp::from_rules(std::move(rules));
}

}  // namespace slpra
