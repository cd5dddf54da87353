#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace polarity::tailfit {

struct PowerLawFit {
    double alpha = 0.0;
    std::int64_t xmin = 1;
    double stderr_alpha = 0.0;
    double ks_distance = 0.0;
    std::size_t n_tail = 0;
    std::size_t n_total = 0;
};

struct FitRefusal {
    std::string reason;
};

using FitOutcome = std::variant<PowerLawFit, FitRefusal>;

struct PowerLawOptions {
    std::size_t min_samples = 50;
    // xmin candidates are the distinct observed values up to this quantile.
    double xmin_quantile = 0.9;
    // Skip the scan and fit at this xmin.
    std::optional<std::int64_t> fixed_xmin;
    double alpha_max = 30.0;
    unsigned threads = 1;
};

// Discrete power law p(x) = x^-alpha / zeta(alpha, xmin), x >= xmin. Alpha
// is the maximum-likelihood estimate on the tail; xmin minimizes the KS
// distance between the empirical and fitted tail CDFs (ties go to the
// smaller xmin). Stderr is 1 / sqrt(n_tail * Fisher information).
FitOutcome fit_power_law(std::span<const std::int64_t> lengths, const PowerLawOptions& options = {});

// P(X >= x) under the fitted law, for x >= xmin.
double power_law_ccdf(double alpha, std::int64_t xmin, std::int64_t x);

}  // namespace polarity::tailfit
