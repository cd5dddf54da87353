#include "polarity/coupling/price_impact.hpp"

#include <algorithm>
#include <cmath>

namespace polarity::coupling {

double quantile_linear(std::span<const double> sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<FiveNumberSummary> five_number_summary(std::span<const double> values) {
    if (values.empty()) return std::nullopt;
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    FiveNumberSummary s;
    s.n = v.size();
    s.q1 = quantile_linear(v, 0.25);
    s.median = quantile_linear(v, 0.5);
    s.q3 = quantile_linear(v, 0.75);
    const double h = s.q3 - s.q1;
    s.lower_fence = s.q1 - 1.5 * h;
    s.upper_fence = s.q3 + 1.5 * h;
    const auto first_in = std::lower_bound(v.begin(), v.end(), s.lower_fence);
    const auto last_in = std::upper_bound(v.begin(), v.end(), s.upper_fence);
    // The quartiles lie inside the fences, so the inside range is never empty.
    s.lower_whisker = *first_in;
    s.upper_whisker = *(last_in - 1);
    s.n_outliers = static_cast<std::size_t>((first_in - v.begin()) + (v.end() - last_in));
    return s;
}

SignGroups split_by_polarity_sign(std::span<const PolarityReturn> pairs) {
    SignGroups g;
    for (const auto& p : pairs) {
        if (p.polarity > 0.0) g.positive.push_back(p.log_return);
        else if (p.polarity < 0.0) g.negative.push_back(p.log_return);
        else g.zero.push_back(p.log_return);
    }
    return g;
}

PriceImpact price_impact_groups(std::span<const PolarityReturn> pairs) {
    const auto g = split_by_polarity_sign(pairs);
    return {five_number_summary(g.negative), five_number_summary(g.zero), five_number_summary(g.positive)};
}

}  // namespace polarity::coupling
