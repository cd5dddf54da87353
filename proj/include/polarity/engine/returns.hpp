#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/market_data/price_files.hpp"
#include "polarity/market_data/trading_grid.hpp"

namespace polarity::engine {

enum class LimitStatus { kWithin, kAtLimit, kBeyondLimit };

struct DailyReturn {
    Date date;
    double pct = 0.0;  // (close_d - close_{d-1}) / close_{d-1}
    LimitStatus limit = LimitStatus::kWithin;
};

using BarSeries = market::BarArray<std::optional<double>>;

// Return series of one stock or index. The first day of the sample has no
// daily return; an intraday cell is missing when a price it needs is missing.
struct ReturnSeries {
    std::string id;
    std::vector<DailyReturn> daily;
    std::map<Date, BarSeries> intraday_log;             // log p_t - log p_{t-1}, same day
    std::map<Date, BarSeries> intraday_pct_prev_close;  // (p_t - close_{d-1}) / close_{d-1}
    std::map<Date, BarSeries> intraday_pct_prev_minute; // (p_t - p_{t-1}) / p_{t-1}, same day

    std::optional<double> daily_pct(Date d) const;
};

struct ReturnOptions {
    double price_limit = 0.10;            // daily move limit as a fraction
    double limit_tolerance = 0.001;       // tick rounding around the limit
};

// Computes every return series keyed by id. Non-positive prices throw
// Error(data) naming the record.
std::map<std::string, ReturnSeries> compute_returns(std::span<const market::EodPrice> eod,
                                                    std::span<const market::IntradayPrice> intraday,
                                                    ReturnOptions options = {});

LimitStatus classify_limit(double pct, const ReturnOptions& options = {});

}  // namespace polarity::engine
