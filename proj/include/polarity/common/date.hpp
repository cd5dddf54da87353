#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace polarity {

// Calendar date packed as yyyymmdd; ordering matches chronological order.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t yyyymmdd) : ymd_(yyyymmdd) {}
    static Date from_ymd(int year, int month, int day);

    // Accepts "YYYY-MM-DD" or "YYYYMMDD". Returns nullopt on anything else,
    // including impossible calendar dates.
    static std::optional<Date> parse(std::string_view text);

    constexpr std::int32_t yyyymmdd() const { return ymd_; }
    int year() const { return ymd_ / 10000; }
    int month() const { return (ymd_ / 100) % 100; }
    int day() const { return ymd_ % 100; }

    // Days since 1970-01-01.
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);
    // 0 = Sunday ... 6 = Saturday
    int weekday() const;

    std::string to_string() const;  // YYYY-MM-DD

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int32_t ymd_ = 0;
};

// Milliseconds since midnight.
class TimeOfDay {
public:
    constexpr TimeOfDay() = default;
    constexpr explicit TimeOfDay(std::int32_t ms) : ms_(ms) {}
    static constexpr TimeOfDay hms(int h, int m, int s, int ms = 0) {
        return TimeOfDay(((h * 60 + m) * 60 + s) * 1000 + ms);
    }

    // Accepts "HH:MM:SS", "HH:MM:SS.f..." (fraction truncated to ms) and "HH:MM".
    static std::optional<TimeOfDay> parse(std::string_view text);

    constexpr std::int32_t millis() const { return ms_; }
    std::string to_string() const;  // HH:MM:SS.mmm

    constexpr auto operator<=>(const TimeOfDay&) const = default;

private:
    std::int32_t ms_ = 0;
};

}  // namespace polarity
