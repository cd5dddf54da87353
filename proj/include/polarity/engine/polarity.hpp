#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polarity/market_data/transaction.hpp"

namespace polarity::engine {

// Buying and selling man-times of one cell: distinct order serials per side.
struct ManTimes {
    std::uint32_t buy = 0;
    std::uint32_t sell = 0;

    std::uint32_t total() const { return buy + sell; }
    bool operator==(const ManTimes&) const = default;
};

// Number of distinct values; reorders `serials`.
std::uint32_t count_distinct(std::span<std::uint64_t> serials);

// Man-times of a batch of trades that share (stock, day, bar). Order of the
// batch does not matter.
ManTimes count_mantimes(std::span<const market::TransactionRecord> batch);

// (buy - sell) / (buy + sell), missing when no one traded.
constexpr std::optional<double> polarity(std::uint32_t buy, std::uint32_t sell) {
    if (buy == 0 && sell == 0) return std::nullopt;
    return (static_cast<double>(buy) - static_cast<double>(sell)) / (static_cast<double>(buy) + static_cast<double>(sell));
}

constexpr std::optional<double> polarity(ManTimes m) { return polarity(m.buy, m.sell); }

}  // namespace polarity::engine
