#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/common/date.hpp"

namespace polarity::flips {

// One stock-day of polarity with zeros and missing cells removed.
struct FlipSeries {
    std::string stock_id;
    Date trade_date;
    std::vector<double> values;        // nonzero, original order
    std::size_t effective_length = 0;  // non-missing cells before zero removal
};

struct DailyFlipSummary {
    std::string stock_id;
    Date trade_date;
    std::size_t flip_count = 0;
    std::size_t effective_length = 0;
    double standardized_flips = 0.0;  // flip_count / effective_length
    double depth = 0.0;               // sum of |jump| at each sign flip
    std::optional<double> averaged_depth;  // depth / flip_count
};

enum class Sign { kPositive, kNegative };

inline const char* sign_name(Sign s) { return s == Sign::kPositive ? "positive" : "negative"; }

// A maximal same-sign run bounded on both sides by opposite-sign values.
struct RunLengthSample {
    std::string stock_id;
    Date trade_date;
    Sign sign = Sign::kPositive;
    std::size_t length = 0;  // positions in the zero-removed sequence

    bool operator==(const RunLengthSample&) const = default;
};

FlipSeries build_flip_series(std::span<const std::optional<double>> row, std::string stock_id = {},
                             Date trade_date = {});

// Flips and depth are both taken over adjacent pairs of the zero-removed
// sequence whose signs differ.
DailyFlipSummary flip_stats(const FlipSeries& fs);

// Runs touching the start or end of the day are censored and not emitted.
std::vector<RunLengthSample> run_lengths(const FlipSeries& fs);

}  // namespace polarity::flips
