#include "polarity/engine/direction_ratios.hpp"

#include <cmath>

namespace polarity::engine {

std::optional<DirectionRatios> direction_ratios(std::span<const std::optional<double>> values) {
    std::size_t pos = 0, neg = 0, zero = 0;
    for (const auto& v : values) {
        if (!v) continue;
        if (*v > 0.0) ++pos;
        else if (*v < 0.0) ++neg;
        else ++zero;
    }
    const std::size_t n = pos + neg + zero;
    if (n == 0) return std::nullopt;
    DirectionRatios r;
    r.n = n;
    r.pos_ratio = static_cast<double>(pos) / static_cast<double>(n);
    r.neg_ratio = static_cast<double>(neg) / static_cast<double>(n);
    r.zero_ratio = static_cast<double>(zero) / static_cast<double>(n);
    return r;
}

std::optional<DirectionRatios> direction_ratios(const PolarityPanel& panel, std::size_t stock, const Period& period) {
    std::vector<std::optional<double>> values;
    for (std::size_t d = 0; d < panel.dates().size(); ++d) {
        if (!period.contains(panel.dates()[d])) continue;
        const auto row = panel.row(stock, d);
        values.insert(values.end(), row.begin(), row.end());
    }
    auto r = direction_ratios(values);
    if (r) {
        r->stock_id = panel.stocks()[stock];
        r->period = period.label;
    }
    return r;
}

PolarityMoments moments(std::span<const double> values) {
    PolarityMoments m;
    m.n = values.size();
    if (m.n == 0) return m;
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(m.n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    if (m.n > 1) m.std = std::sqrt(m2 / static_cast<double>(m.n - 1));
    const double pm2 = m2 / static_cast<double>(m.n);
    const double pm4 = m4 / static_cast<double>(m.n);
    m.excess_kurtosis = pm2 > 0.0 ? pm4 / (pm2 * pm2) - 3.0 : 0.0;
    return m;
}

PolarityMoments polarity_moments(const PolarityPanel& panel) {
    std::vector<double> values;
    for (std::size_t s = 0; s < panel.stocks().size(); ++s)
        for (std::size_t d = 0; d < panel.dates().size(); ++d)
            for (int b = 1; b <= market::kBarsPerDay; ++b)
                if (auto p = panel.polarity(s, d, b)) values.push_back(*p);
    return moments(values);
}

}  // namespace polarity::engine
