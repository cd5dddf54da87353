#include "polarity/flips/flip_analytics.hpp"

#include <cmath>

namespace polarity::flips {

FlipSeries build_flip_series(std::span<const std::optional<double>> row, std::string stock_id, Date trade_date) {
    FlipSeries fs;
    fs.stock_id = std::move(stock_id);
    fs.trade_date = trade_date;
    for (const auto& v : row) {
        if (!v) continue;
        ++fs.effective_length;
        if (*v != 0.0) fs.values.push_back(*v);
    }
    return fs;
}

DailyFlipSummary flip_stats(const FlipSeries& fs) {
    DailyFlipSummary s;
    s.stock_id = fs.stock_id;
    s.trade_date = fs.trade_date;
    s.effective_length = fs.effective_length;
    for (std::size_t i = 1; i < fs.values.size(); ++i) {
        if ((fs.values[i] > 0.0) != (fs.values[i - 1] > 0.0)) {
            ++s.flip_count;
            s.depth += std::abs(fs.values[i] - fs.values[i - 1]);
        }
    }
    if (fs.effective_length > 0)
        s.standardized_flips = static_cast<double>(s.flip_count) / static_cast<double>(fs.effective_length);
    if (s.flip_count > 0) s.averaged_depth = s.depth / static_cast<double>(s.flip_count);
    return s;
}

std::vector<RunLengthSample> run_lengths(const FlipSeries& fs) {
    std::vector<RunLengthSample> out;
    const auto& v = fs.values;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= v.size(); ++i) {
        const bool run_ends = i == v.size() || (v[i] > 0.0) != (v[i - 1] > 0.0);
        if (!run_ends) continue;
        // Interior runs only: something before the run and something after it.
        if (run_start > 0 && i < v.size())
            out.push_back({fs.stock_id, fs.trade_date, v[run_start] > 0.0 ? Sign::kPositive : Sign::kNegative,
                           i - run_start});
        run_start = i;
    }
    return out;
}

}  // namespace polarity::flips
