#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "slpra/error.hpp"

namespace slpra {

/// Range-maximum sparse table answering argmax queries in O(1). Ties
/// resolve to the lowest index.
template <class T>
class SparseTableMax {
public:
    SparseTableMax() = default;

    explicit SparseTableMax(std::span<const T> values) : values_(values.begin(), values.end())
    {
        if (values_.empty()) {
            throw ArgumentError("range-maximum structure over an empty array");
        }
        const std::size_t n = values_.size();
        const std::size_t levels = std::bit_width(n);
        table_.resize(levels);
        table_[0].resize(n);
        for (std::size_t i = 0; i < n; ++i) table_[0][i] = static_cast<std::uint32_t>(i);
        for (std::size_t lvl = 1; lvl < levels; ++lvl) {
            const std::size_t half = std::size_t{1} << (lvl - 1);
            const std::size_t count = n - (std::size_t{1} << lvl) + 1;
            table_[lvl].resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                table_[lvl][i] = better(table_[lvl - 1][i], table_[lvl - 1][i + half]);
            }
        }
    }

    /// Index of a maximum in [lo, hi] (inclusive).
    std::size_t query(std::size_t lo, std::size_t hi) const
    {
        const std::size_t lvl = std::bit_width(hi - lo + 1) - 1;
        return better(table_[lvl][lo], table_[lvl][hi + 1 - (std::size_t{1} << lvl)]);
    }

    std::size_t size() const { return values_.size(); }

private:
    std::uint32_t better(std::uint32_t a, std::uint32_t b) const
    {
        if (values_[b] > values_[a]) return b;
        if (values_[a] > values_[b]) return a;
        return a < b ? a : b;
    }

    std::vector<T> values_;
    std::vector<std::vector<std::uint32_t>> table_;
};

}  // namespace slpra
