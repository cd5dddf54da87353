#include "polarity/engine/returns.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/common/error.hpp"
#include "polarity/common/format.hpp"

namespace polarity::engine {

using market::kBarsPerDay;

std::optional<double> ReturnSeries::daily_pct(Date d) const {
    auto it = std::lower_bound(daily.begin(), daily.end(), d,
                               [](const DailyReturn& r, Date date) { return r.date < date; });
    if (it == daily.end() || it->date != d) return std::nullopt;
    return it->pct;
}

LimitStatus classify_limit(double pct, const ReturnOptions& options) {
    const double a = std::abs(pct);
    if (a > options.price_limit + options.limit_tolerance) return LimitStatus::kBeyondLimit;
    if (a >= options.price_limit - options.limit_tolerance) return LimitStatus::kAtLimit;
    return LimitStatus::kWithin;
}

std::map<std::string, ReturnSeries> compute_returns(std::span<const market::EodPrice> eod,
                                                    std::span<const market::IntradayPrice> intraday,
                                                    ReturnOptions options) {
    std::map<std::string, std::map<Date, double>> closes;
    for (const auto& p : eod) {
        if (!(p.close > 0.0))
            throw Error(ErrorCategory::kData, "non-positive close " + format_double(p.close) + " for " + p.id + " on " +
                                                  p.date.to_string());
        closes[p.id][p.date] = p.close;
    }
    std::map<std::string, std::map<Date, BarSeries>> lasts;
    for (const auto& p : intraday) {
        if (p.bar < 1 || p.bar > kBarsPerDay)
            throw Error(ErrorCategory::kData, "bar " + std::to_string(p.bar) + " outside grid for " + p.id);
        if (p.last_price && !(*p.last_price > 0.0))
            throw Error(ErrorCategory::kData, "non-positive last price " + format_double(*p.last_price) + " for " + p.id +
                                                  " on " + p.date.to_string() + " bar " + std::to_string(p.bar));
        lasts[p.id][p.date][p.bar - 1] = p.last_price;
    }

    std::map<std::string, ReturnSeries> out;
    for (const auto& [id, by_date] : closes) {
        auto& series = out[id];
        series.id = id;
        std::optional<double> prev;
        for (const auto& [date, close] : by_date) {
            if (prev) {
                const double pct = (close - *prev) / *prev;
                series.daily.push_back({date, pct, classify_limit(pct, options)});
            }
            prev = close;
        }
    }
    for (const auto& [id, by_date] : lasts) {
        auto& series = out[id];
        series.id = id;
        const auto close_it = closes.find(id);
        for (const auto& [date, bars] : by_date) {
            std::optional<double> prev_close;
            if (close_it != closes.end()) {
                auto it = close_it->second.lower_bound(date);
                if (it != close_it->second.begin()) prev_close = std::prev(it)->second;
            }
            BarSeries log_r{}, pct_close{}, pct_minute{};
            for (int b = 0; b < kBarsPerDay; ++b) {
                const auto& p = bars[b];
                if (!p) continue;
                if (prev_close) pct_close[b] = (*p - *prev_close) / *prev_close;
                if (b > 0 && bars[b - 1]) {
                    log_r[b] = std::log(*p) - std::log(*bars[b - 1]);
                    pct_minute[b] = (*p - *bars[b - 1]) / *bars[b - 1];
                }
            }
            series.intraday_log[date] = log_r;
            series.intraday_pct_prev_close[date] = pct_close;
            series.intraday_pct_prev_minute[date] = pct_minute;
        }
    }
    return out;
}

}  // namespace polarity::engine
