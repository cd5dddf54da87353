#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarity/common/period.hpp"

namespace polarity::coupling {

// Daily market polarity (taken at the index's intraday low) joined with an
// external daily emotion index (ratio of joy to fear).
struct EmotionPoint {
    Date date;
    double polarity = 0.0;
    double rjf = 0.0;
};

struct PeriodCorrelation {
    std::string period;
    std::optional<double> r;  // missing below 3 joined days
    std::size_t n = 0;
};

struct EmotionCorrelation {
    PeriodCorrelation overall;
    std::vector<PeriodCorrelation> periods;  // pre-crash, crash, post-crash
};

// Reads (date, rjf_value) rows with a header. Non-positive values are
// Error(data).
std::map<Date, double> read_emotion_series(const std::filesystem::path& path, char delimiter = ',');

std::vector<EmotionPoint> join_emotion(const std::map<Date, double>& daily_polarity, const std::map<Date, double>& rjf);

EmotionCorrelation emotion_correlation(std::span<const EmotionPoint> points, const CrashPeriods& periods = {});

}  // namespace polarity::coupling
