#include "polarity/engine/market_polarity.hpp"

#include "polarity/common/error.hpp"

namespace polarity::engine {

MarketPolarityCell market_polarity(const PolarityPanel& panel, std::size_t date, int bar) {
    MarketPolarityCell cell;
    double sum = 0.0;
    for (std::size_t s = 0; s < panel.stocks().size(); ++s) {
        if (auto p = panel.polarity(s, date, bar)) {
            sum += *p;
            ++cell.n_stocks;
        }
    }
    if (cell.n_stocks > 0) cell.value = sum / static_cast<double>(cell.n_stocks);
    return cell;
}

market::BarArray<MarketPolarityCell> market_polarity_day(const PolarityPanel& panel, std::size_t date) {
    market::BarArray<MarketPolarityCell> out;
    for (int b = 1; b <= market::kBarsPerDay; ++b) out[b - 1] = market_polarity(panel, date, b);
    return out;
}

IndexMinimum polarity_at_index_minimum(const market::BarArray<std::optional<double>>& market_polarity,
                                       const market::BarArray<std::optional<double>>& index_returns) {
    std::optional<IndexMinimum> best;
    for (int b = 1; b <= market::kBarsPerDay; ++b) {
        const auto& r = index_returns[b - 1];
        if (!r) continue;
        if (!best || *r < best->index_return) best = IndexMinimum{b, *r, market_polarity[b - 1]};
    }
    if (!best) throw Error(ErrorCategory::kData, "index has no intraday returns for the day");
    return *best;
}

}  // namespace polarity::engine
