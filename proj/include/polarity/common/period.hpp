#pragma once

#include <string>

#include "polarity/common/date.hpp"

namespace polarity {

// Inclusive date range with a label, e.g. "pre-crash".
struct Period {
    std::string label;
    Date first;
    Date last;

    bool contains(Date d) const { return first <= d && d <= last; }
};

// Three-way split of the sample: [.., pre_crash_end], (pre_crash_end,
// crash_end], (crash_end, ..).
struct CrashPeriods {
    Date pre_crash_end = Date::from_ymd(2015, 6, 12);
    Date crash_end = Date::from_ymd(2015, 7, 7);

    static constexpr const char* kPreCrash = "pre-crash";
    static constexpr const char* kCrash = "crash";
    static constexpr const char* kPostCrash = "post-crash";

    const char* label(Date d) const {
        if (d <= pre_crash_end) return kPreCrash;
        if (d <= crash_end) return kCrash;
        return kPostCrash;
    }
};

}  // namespace polarity
