#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/common/date.hpp"

namespace polarity::coupling {

struct GrangerOptions {
    int max_lag = 5;
    std::size_t min_observations = 60;  // usable rows after lag trimming
    double significance = 0.05;
};

// Bivariate test of "cause Granger-causes effect" for one day.
struct GrangerTest {
    bool tested = false;
    std::string skip_reason;
    int lag = 0;  // chosen by BIC over 1..max_lag
    double f_stat = 0.0;
    double p_value = 1.0;
    int df1 = 0;
    int df2 = 0;
    std::size_t n_obs = 0;
    bool reject = false;  // p_value < significance
};

// Regresses effect_t on a constant, p lags of effect and p lags of cause,
// with rows kept only where every value up to max_lag back is present
// (so all candidate lags share one sample). Lag p minimizes
// n log(RSS/n) + (2p + 1) log n. F tests the cause lags jointly zero.
// Skips (tested = false) on short or collinear input.
GrangerTest granger_test(std::span<const std::optional<double>> cause, std::span<const std::optional<double>> effect,
                         const GrangerOptions& options = {});

enum class GrangerDirection { kPolarityToReturn, kReturnToPolarity };

inline const char* direction_name(GrangerDirection d) {
    return d == GrangerDirection::kPolarityToReturn ? "polarity->return" : "return->polarity";
}

struct GrangerDayInput {
    Date date;
    std::vector<std::optional<double>> polarity;
    std::vector<std::optional<double>> returns;
};

struct GrangerDayResult {
    Date date;
    GrangerDirection direction = GrangerDirection::kPolarityToReturn;
    GrangerTest test;
};

struct DirectionPassRate {
    std::size_t tested = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;
    std::optional<double> rate;  // passed / tested
};

struct GrangerSummary {
    std::vector<GrangerDayResult> days;  // two entries per day, in input order
    DirectionPassRate polarity_to_return;
    DirectionPassRate return_to_polarity;
};

GrangerSummary granger_pass_rates(std::span<const GrangerDayInput> days, const GrangerOptions& options = {},
                                  unsigned threads = 1);

}  // namespace polarity::coupling
