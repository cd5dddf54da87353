#pragma once

#include <array>
#include <optional>

#include "polarity/common/date.hpp"

namespace polarity::market {

// Continuous-trading minute grid of the exchange: 09:30-11:30 (bars 1-120)
// and 13:00-14:57 (bars 121-237). Bar k covers [start_k, start_k + 60s).
inline constexpr int kBarsPerDay = 237;
inline constexpr int kMorningBars = 120;

inline constexpr TimeOfDay kMorningOpen = TimeOfDay::hms(9, 30, 0);
inline constexpr TimeOfDay kMorningClose = TimeOfDay::hms(11, 30, 0);
inline constexpr TimeOfDay kAfternoonOpen = TimeOfDay::hms(13, 0, 0);
inline constexpr TimeOfDay kAfternoonClose = TimeOfDay::hms(14, 57, 0);

// Values indexed by bar - 1.
template <typename T>
using BarArray = std::array<T, kBarsPerDay>;

// Bar index 1..237, or nullopt for auction, lunch and after-hours times.
constexpr std::optional<int> assign_bar(TimeOfDay t) {
    const int ms = t.millis();
    if (ms >= kMorningOpen.millis() && ms < kMorningClose.millis())
        return 1 + (ms - kMorningOpen.millis()) / 60'000;
    if (ms >= kAfternoonOpen.millis() && ms < kAfternoonClose.millis())
        return kMorningBars + 1 + (ms - kAfternoonOpen.millis()) / 60'000;
    return std::nullopt;
}

// Start time of bar 1..237.
constexpr TimeOfDay bar_start(int bar) {
    if (bar <= kMorningBars) return TimeOfDay(kMorningOpen.millis() + (bar - 1) * 60'000);
    return TimeOfDay(kAfternoonOpen.millis() + (bar - kMorningBars - 1) * 60'000);
}

}  // namespace polarity::market
