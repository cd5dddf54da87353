#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace polarity::tailfit {

// B = (sigma - mu) / (sigma + mu); -1 regular, 0 Poisson-like, 1 most bursty.
struct BurstinessResult {
    double B = 0.0;
    double mean_tau = 0.0;
    double std_tau = 0.0;  // sample standard deviation, n - 1 denominator
    std::size_t n = 0;
};

// nullopt for an empty sample. A single observation has std 0 and B = -1.
std::optional<BurstinessResult> burstiness(std::span<const double> lengths);

}  // namespace polarity::tailfit
