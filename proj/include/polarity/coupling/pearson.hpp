#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "polarity/market_data/trading_grid.hpp"

namespace polarity::coupling {

// Sample Pearson correlation; nullopt when n < 2 or either input is
// constant. Inputs must have equal length (Error(data) otherwise).
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Correlation over the bars where both series are present; nullopt below
// `min_bars` aligned bars or when either side is constant.
std::optional<double> stock_day_correlation(const market::BarArray<std::optional<double>>& polarity,
                                            const market::BarArray<std::optional<double>>& log_returns,
                                            std::size_t min_bars = 30);

// Pearson r between aligned market polarity and index return observations.
// Throws Error(numeric) for fewer than 2 points or a constant series.
double market_correlation(std::span<const double> market_polarity, std::span<const double> index_returns);

}  // namespace polarity::coupling
