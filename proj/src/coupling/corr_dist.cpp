#include "polarity/coupling/corr_dist.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/common/error.hpp"
#include "polarity/common/format.hpp"

namespace polarity::coupling {

std::size_t BinGrid::bin_of(double x) const {
    const double t = (x - lo) / (hi - lo) * static_cast<double>(bins);
    const auto b = static_cast<std::ptrdiff_t>(std::floor(t));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1));
}

CorrDist build_corr_dist(Date date, std::vector<double> coefficients, const BinGrid& grid) {
    if (grid.bins == 0 || !(grid.hi > grid.lo) || grid.pseudo_count < 0.0)
        throw Error(ErrorCategory::kConfig, "invalid correlation bin grid");
    CorrDist dist;
    dist.trade_date = date;
    dist.grid = grid;
    dist.n_stocks = coefficients.size();
    std::vector<double> counts(grid.bins, grid.pseudo_count);
    for (double r : coefficients) {
        if (!(r >= grid.lo && r <= grid.hi))
            throw Error(ErrorCategory::kData, "correlation " + format_double(r) + " outside bin range on " + date.to_string());
        counts[grid.bin_of(r)] += 1.0;
    }
    const double total = static_cast<double>(coefficients.size()) + grid.pseudo_count * static_cast<double>(grid.bins);
    if (!(total > 0.0)) throw Error(ErrorCategory::kNumeric, "empty correlation distribution with zero pseudo-count");
    dist.histogram.resize(grid.bins);
    for (std::size_t b = 0; b < grid.bins; ++b) dist.histogram[b] = counts[b] / total;
    dist.coefficients = std::move(coefficients);
    return dist;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw Error(ErrorCategory::kData, "KL divergence: histogram sizes differ");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) throw Error(ErrorCategory::kNumeric, "KL divergence infinite: reference bin is empty");
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

double kl_divergence(const CorrDist& today, const CorrDist& yesterday) {
    if (!(today.grid == yesterday.grid))
        throw Error(ErrorCategory::kData, "KL divergence: distributions use different bin grids");
    return kl_divergence(today.histogram, yesterday.histogram);
}

}  // namespace polarity::coupling
