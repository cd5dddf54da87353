#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polarity/common/date.hpp"

namespace polarity::coupling {

// Equal-width bins on [lo, hi]; the last bin is closed on the right.
// pseudo_count is added to every bin before normalizing so that
// KL divergence stays finite when bins are empty.
struct BinGrid {
    std::size_t bins = 40;
    double lo = -1.0;
    double hi = 1.0;
    double pseudo_count = 0.5;

    std::size_t bin_of(double x) const;
    bool operator==(const BinGrid&) const = default;
};

// One day's cross-section of per-stock polarity/return correlations.
struct CorrDist {
    Date trade_date;
    std::vector<double> coefficients;
    std::vector<double> histogram;  // smoothed probabilities, sums to 1
    BinGrid grid;
    std::size_t n_stocks = 0;
};

// Throws Error(data) for coefficients outside [-1, 1].
CorrDist build_corr_dist(Date date, std::vector<double> coefficients, const BinGrid& grid = {});

// sum_x Q_d(x) log(Q_d(x) / Q_{d-1}(x)), natural log. Throws Error(data)
// when the two distributions use different grids.
double kl_divergence(const CorrDist& today, const CorrDist& yesterday);
double kl_divergence(std::span<const double> p, std::span<const double> q);

}  // namespace polarity::coupling
