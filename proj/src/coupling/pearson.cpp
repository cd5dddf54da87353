#include "polarity/coupling/pearson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polarity/common/error.hpp"

namespace polarity::coupling {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCategory::kData, "pearson: series lengths differ");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> stock_day_correlation(const market::BarArray<std::optional<double>>& polarity,
                                            const market::BarArray<std::optional<double>>& log_returns,
                                            std::size_t min_bars) {
    std::vector<double> x, y;
    x.reserve(market::kBarsPerDay);
    y.reserve(market::kBarsPerDay);
    for (int b = 0; b < market::kBarsPerDay; ++b) {
        if (polarity[b] && log_returns[b]) {
            x.push_back(*polarity[b]);
            y.push_back(*log_returns[b]);
        }
    }
    if (x.size() < min_bars) return std::nullopt;
    return pearson(x, y);
}

double market_correlation(std::span<const double> market_polarity, std::span<const double> index_returns) {
    auto r = pearson(market_polarity, index_returns);
    if (!r) throw Error(ErrorCategory::kNumeric, "market correlation undefined: need >= 2 points and non-constant series");
    return *r;
}

}  // namespace polarity::coupling
