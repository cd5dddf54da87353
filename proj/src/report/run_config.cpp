#include "polarity/report/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>

#include "polarity/common/error.hpp"

namespace polarity::report {

namespace {

enum class KeyType { kString, kPath, kDate, kUInt, kInt, kDouble, kBool, kObject };

const std::map<std::string, KeyType>& known_keys() {
    static const std::map<std::string, KeyType> keys = {
        {"transactions", KeyType::kPath},      {"cache", KeyType::kPath},
        {"eod_prices", KeyType::kPath},        {"intraday_prices", KeyType::kPath},
        {"emotion", KeyType::kPath},           {"capitalization", KeyType::kPath},
        {"synth_spec", KeyType::kPath},        {"out", KeyType::kPath},
        {"schema", KeyType::kObject},          {"malformed_threshold", KeyType::kDouble},
        {"index_id", KeyType::kString},        {"pre_crash_end", KeyType::kDate},
        {"crash_end", KeyType::kDate},         {"bins", KeyType::kUInt},
        {"pseudo_count", KeyType::kDouble},    {"min_corr_bars", KeyType::kUInt},
        {"min_fit_samples", KeyType::kUInt},   {"max_granger_lag", KeyType::kInt},
        {"granger_return_mode", KeyType::kString}, {"count_mode", KeyType::kString},
        {"burstiness_mode", KeyType::kString}, {"verify_scenarios", KeyType::kUInt},
        {"threads", KeyType::kUInt},           {"seed", KeyType::kUInt},
    };
    return keys;
}

[[noreturn]] void bad(const std::string& why) { throw Error(ErrorCategory::kConfig, why); }

Date parse_date_key(const nlohmann::json& j, const char* key) {
    auto d = Date::parse(j.at(key).get<std::string>());
    if (!d) bad(std::string("config: ") + key + " must be YYYY-MM-DD");
    return *d;
}

}  // namespace

const char* return_mode_name(ReturnMode m) { return m == ReturnMode::kPrevMinute ? "vs-prev-minute" : "vs-prev-close"; }

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known_keys().contains(key)) bad("config: unknown key '" + key + "'");
    }
    RunConfig c;
    try {
        auto path = [&](const char* key, std::filesystem::path& out) {
            if (j.contains(key)) out = j.at(key).get<std::string>();
        };
        path("transactions", c.transactions);
        path("cache", c.cache);
        path("eod_prices", c.eod_prices);
        path("intraday_prices", c.intraday_prices);
        path("emotion", c.emotion);
        path("capitalization", c.capitalization);
        path("synth_spec", c.synth_spec);
        path("out", c.out);
        if (j.contains("schema")) {
            const auto& s = j.at("schema");
            const std::string delim = s.value("delimiter", std::string(","));
            if (delim.size() != 1) bad("config: schema.delimiter must be one character");
            const bool header = s.value("has_header", true);
            if (s.contains("columns"))
                c.schema = market::Schema::from_names(s.at("columns").get<std::vector<std::string>>(), delim[0], header);
            else {
                c.schema.delimiter = delim[0];
                c.schema.has_header = header;
            }
        }
        c.malformed_threshold = j.value("malformed_threshold", c.malformed_threshold);
        c.index_id = j.value("index_id", c.index_id);
        if (j.contains("pre_crash_end")) c.periods.pre_crash_end = parse_date_key(j, "pre_crash_end");
        if (j.contains("crash_end")) c.periods.crash_end = parse_date_key(j, "crash_end");
        c.bins = j.value("bins", c.bins);
        c.pseudo_count = j.value("pseudo_count", c.pseudo_count);
        c.min_corr_bars = j.value("min_corr_bars", c.min_corr_bars);
        c.min_fit_samples = j.value("min_fit_samples", c.min_fit_samples);
        c.max_granger_lag = j.value("max_granger_lag", c.max_granger_lag);
        const std::string mode = j.value("granger_return_mode", std::string(return_mode_name(c.granger_return_mode)));
        if (mode == "vs-prev-minute") c.granger_return_mode = ReturnMode::kPrevMinute;
        else if (mode == "vs-prev-close") c.granger_return_mode = ReturnMode::kPrevClose;
        else bad("config: granger_return_mode must be vs-prev-minute or vs-prev-close");
        const std::string count = j.value("count_mode", std::string("per-bar"));
        if (count == "per-bar") c.count_mode = engine::CountMode::kPerBar;
        else if (count == "per-day") c.count_mode = engine::CountMode::kPerDay;
        else bad("config: count_mode must be per-bar or per-day");
        const std::string burst = j.value("burstiness_mode", std::string("all"));
        if (burst == "all") c.burstiness_tail_only = false;
        else if (burst == "tail") c.burstiness_tail_only = true;
        else bad("config: burstiness_mode must be all or tail");
        c.verify_scenarios = j.value("verify_scenarios", c.verify_scenarios);
        c.threads = j.value("threads", c.threads);
        if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
    if (!(c.malformed_threshold >= 0.0 && c.malformed_threshold <= 1.0)) bad("config: malformed_threshold must be in [0, 1]");
    if (c.bins < 2 || c.bins > 10000) bad("config: bins must be in [2, 10000]");
    if (!(c.pseudo_count > 0.0)) bad("config: pseudo_count must be > 0");
    if (c.min_corr_bars < 3) bad("config: min_corr_bars must be >= 3");
    if (c.min_fit_samples < 2) bad("config: min_fit_samples must be >= 2");
    if (c.max_granger_lag < 1 || c.max_granger_lag > 30) bad("config: max_granger_lag must be in [1, 30]");
    if (c.threads < 1 || c.threads > 1024) bad("config: threads must be in [1, 1024]");
    if (c.periods.crash_end < c.periods.pre_crash_end) bad("config: crash_end precedes pre_crash_end");
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::kConfig, "cannot open config " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        bad("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

void RunConfig::validate_paths() const {
    const std::pair<const char*, const std::filesystem::path*> inputs[] = {
        {"transactions", &transactions}, {"eod_prices", &eod_prices}, {"intraday_prices", &intraday_prices},
        {"emotion", &emotion},           {"capitalization", &capitalization}, {"synth_spec", &synth_spec},
    };
    for (const auto& [key, path] : inputs) {
        if (!path->empty() && !std::filesystem::exists(*path))
            bad(std::string("config: ") + key + " path does not exist: " + path->string());
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["transactions"] = transactions.string();
    j["cache"] = cache.string();
    j["eod_prices"] = eod_prices.string();
    j["intraday_prices"] = intraday_prices.string();
    j["emotion"] = emotion.string();
    j["capitalization"] = capitalization.string();
    j["synth_spec"] = synth_spec.string();
    std::vector<std::string> cols;
    for (auto f : schema.columns) cols.push_back(market::field_name(f));
    j["schema"] = {{"delimiter", std::string(1, schema.delimiter)}, {"has_header", schema.has_header}, {"columns", cols}};
    j["malformed_threshold"] = malformed_threshold;
    j["index_id"] = index_id;
    j["pre_crash_end"] = periods.pre_crash_end.to_string();
    j["crash_end"] = periods.crash_end.to_string();
    j["bins"] = bins;
    j["pseudo_count"] = pseudo_count;
    j["min_corr_bars"] = min_corr_bars;
    j["min_fit_samples"] = min_fit_samples;
    j["max_granger_lag"] = max_granger_lag;
    j["granger_return_mode"] = return_mode_name(granger_return_mode);
    j["count_mode"] = count_mode == engine::CountMode::kPerBar ? "per-bar" : "per-day";
    j["burstiness_mode"] = burstiness_tail_only ? "tail" : "all";
    j["verify_scenarios"] = verify_scenarios;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
}

std::string RunConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : to_json().dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> override_keys() {
    std::vector<std::string> keys;
    for (const auto& [key, type] : known_keys())
        if (type != KeyType::kObject) keys.push_back(key);
    return keys;
}

void apply_override(nlohmann::json& j, const std::string& key, const std::string& value) {
    const auto it = known_keys().find(key);
    if (it == known_keys().end() || it->second == KeyType::kObject) bad("unknown override key '" + key + "'");
    auto number = [&](auto& out) {
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) bad("override " + key + ": '" + value + "' is not a number");
    };
    switch (it->second) {
        case KeyType::kUInt: {
            std::uint64_t v = 0;
            number(v);
            j[key] = v;
            break;
        }
        case KeyType::kInt: {
            std::int64_t v = 0;
            number(v);
            j[key] = v;
            break;
        }
        case KeyType::kDouble: {
            double v = 0;
            number(v);
            j[key] = v;
            break;
        }
        case KeyType::kBool:
            if (value != "true" && value != "false") bad("override " + key + " must be true or false");
            j[key] = value == "true";
            break;
        default:
            j[key] = value;
    }
}

}  // namespace polarity::report
