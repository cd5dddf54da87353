#include "polarity/common/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace polarity {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    return Date(year * 10000 + month * 100 + day);
}

std::optional<Date> Date::parse(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
            !parse_int(text.substr(8, 2), d))
            return std::nullopt;
    } else if (text.size() == 8) {
        int packed = 0;
        if (!parse_int(text, packed)) return std::nullopt;
        y = packed / 10000;
        m = (packed / 100) % 100;
        d = packed % 100;
    } else {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return from_ymd(y, m, d);
}

std::int64_t Date::serial() const {
    const std::chrono::year_month_day ymd{std::chrono::year{year()},
                                          std::chrono::month{static_cast<unsigned>(month())},
                                          std::chrono::day{static_cast<unsigned>(day())}};
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

Date Date::from_serial(std::int64_t days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    return from_ymd(static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
                    static_cast<int>(static_cast<unsigned>(ymd.day())));
}

int Date::weekday() const {
    return static_cast<int>(
        std::chrono::weekday{std::chrono::sys_days{std::chrono::days{serial()}}}.c_encoding());
}

std::string Date::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year(), month(), day());
    return buf;
}

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view text) {
    if (text.size() < 5 || text[2] != ':') return std::nullopt;
    int h = 0, m = 0, s = 0, ms = 0;
    if (!parse_int(text.substr(0, 2), h) || !parse_int(text.substr(3, 2), m)) return std::nullopt;
    if (text.size() > 5) {
        if (text.size() < 8 || text[5] != ':' || !parse_int(text.substr(6, 2), s)) return std::nullopt;
        if (text.size() > 8) {
            if (text[8] != '.' || text.size() == 9) return std::nullopt;
            std::string_view frac = text.substr(9);
            int scale = 100;
            for (char c : frac) {
                if (c < '0' || c > '9') return std::nullopt;
                ms += (c - '0') * scale;
                scale /= 10;
            }
        }
    }
    if (h > 23 || m > 59 || s > 59) return std::nullopt;
    return hms(h, m, s, ms);
}

std::string TimeOfDay::to_string() const {
    char buf[32];
    const int h = ms_ / 3'600'000;
    const int m = (ms_ / 60'000) % 60;
    const int s = (ms_ / 1000) % 60;
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d.%03d", h, m, s, ms_ % 1000);
    return buf;
}

}  // namespace polarity
