#include "polarity/coupling/emotion.hpp"

#include <charconv>
#include <fstream>

#include "polarity/common/error.hpp"
#include "polarity/coupling/pearson.hpp"

namespace polarity::coupling {

namespace {

PeriodCorrelation correlate(std::string label, std::span<const EmotionPoint> points) {
    PeriodCorrelation pc;
    pc.period = std::move(label);
    pc.n = points.size();
    if (pc.n < 3) return pc;
    std::vector<double> x, y;
    for (const auto& p : points) {
        x.push_back(p.polarity);
        y.push_back(p.rjf);
    }
    pc.r = pearson(x, y);
    return pc;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::map<Date, double> read_emotion_series(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open emotion series " + path.string());
    std::map<Date, double> out;
    std::string line;
    std::uint64_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorCategory::kData, path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (std::getline(in, line)) ++line_no;  // header
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto pos = t.find(delimiter);
        if (pos == std::string_view::npos) fail("expected date and rjf_value");
        auto date = Date::parse(trim(t.substr(0, pos)));
        if (!date) fail("bad date");
        const auto v = trim(t.substr(pos + 1));
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc() || ptr != v.data() + v.size() || !(value > 0.0)) fail("rjf_value must be a positive number");
        if (!out.emplace(*date, value).second) fail("duplicate date");
    }
    return out;
}

std::vector<EmotionPoint> join_emotion(const std::map<Date, double>& daily_polarity, const std::map<Date, double>& rjf) {
    std::vector<EmotionPoint> out;
    for (const auto& [date, p] : daily_polarity) {
        auto it = rjf.find(date);
        if (it != rjf.end()) out.push_back({date, p, it->second});
    }
    return out;
}

EmotionCorrelation emotion_correlation(std::span<const EmotionPoint> points, const CrashPeriods& periods) {
    EmotionCorrelation result;
    result.overall = correlate("overall", points);
    for (const char* label : {CrashPeriods::kPreCrash, CrashPeriods::kCrash, CrashPeriods::kPostCrash}) {
        std::vector<EmotionPoint> subset;
        for (const auto& p : points)
            if (std::string_view(periods.label(p.date)) == label) subset.push_back(p);
        result.periods.push_back(correlate(label, subset));
    }
    return result;
}

}  // namespace polarity::coupling
