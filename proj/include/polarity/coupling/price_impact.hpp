#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace polarity::coupling {

// Box-plot summary with Tukey fences at 1.5 x IQR. Whiskers are the most
// extreme observations inside the fences; points beyond are outliers.
struct FiveNumberSummary {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::size_t n = 0;
    std::size_t n_outliers = 0;
};

// Quantile with linear interpolation between order statistics; `sorted`
// must be ascending and non-empty.
double quantile_linear(std::span<const double> sorted, double p);

std::optional<FiveNumberSummary> five_number_summary(std::span<const double> values);

struct PolarityReturn {
    double polarity = 0.0;
    double log_return = 0.0;
};

struct SignGroups {
    std::vector<double> negative;
    std::vector<double> zero;
    std::vector<double> positive;
};

SignGroups split_by_polarity_sign(std::span<const PolarityReturn> pairs);

struct PriceImpact {
    std::optional<FiveNumberSummary> negative;
    std::optional<FiveNumberSummary> zero;
    std::optional<FiveNumberSummary> positive;
};

// Immediate price impact: returns grouped by the sign of the same minute's
// polarity. An empty group has no summary.
PriceImpact price_impact_groups(std::span<const PolarityReturn> pairs);

}  // namespace polarity::coupling
