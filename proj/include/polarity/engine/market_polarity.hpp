#pragma once

#include <cstddef>
#include <optional>

#include "polarity/engine/panel.hpp"

namespace polarity::engine {

struct MarketPolarityCell {
    std::optional<double> value;  // mean over stocks that traded in the bar
    std::size_t n_stocks = 0;
};

// Equal-weighted cross-stock mean of the polarities available at (date, bar).
MarketPolarityCell market_polarity(const PolarityPanel& panel, std::size_t date, int bar);

market::BarArray<MarketPolarityCell> market_polarity_day(const PolarityPanel& panel, std::size_t date);

struct IndexMinimum {
    int bar = 1;
    double index_return = 0.0;
    std::optional<double> polarity;  // market polarity at that bar
};

// Market polarity at the bar where the index's intraday return is lowest
// (earliest bar on ties). Throws Error(data) if the index has no returns.
IndexMinimum polarity_at_index_minimum(const market::BarArray<std::optional<double>>& market_polarity,
                                       const market::BarArray<std::optional<double>>& index_returns);

}  // namespace polarity::engine
