#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/common/period.hpp"
#include "polarity/engine/panel.hpp"

namespace polarity::engine {

// Shares of positive, negative and zero polarities among non-missing cells.
struct DirectionRatios {
    std::string stock_id;
    std::string period;
    double pos_ratio = 0.0;
    double neg_ratio = 0.0;
    double zero_ratio = 0.0;
    std::size_t n = 0;
};

// nullopt when there are no non-missing values.
std::optional<DirectionRatios> direction_ratios(std::span<const std::optional<double>> values);

std::optional<DirectionRatios> direction_ratios(const PolarityPanel& panel, std::size_t stock, const Period& period);

// Distribution moments of every non-missing polarity in the panel. Excess
// kurtosis (normal = 0) from population central moments; std uses n - 1.
struct PolarityMoments {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
    double excess_kurtosis = 0.0;
};

PolarityMoments polarity_moments(const PolarityPanel& panel);
PolarityMoments moments(std::span<const double> values);

}  // namespace polarity::engine
