#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarity/common/period.hpp"
#include "polarity/engine/panel.hpp"
#include "polarity/market_data/transaction.hpp"

namespace polarity::report {

enum class ReturnMode { kPrevMinute, kPrevClose };

// Everything a subcommand needs. Loaded from a JSON file whose keys match
// the field names below; command-line overrides use the same keys.
struct RunConfig {
    std::filesystem::path transactions;
    std::filesystem::path cache;
    std::filesystem::path eod_prices;
    std::filesystem::path intraday_prices;
    std::filesystem::path emotion;
    std::filesystem::path capitalization;
    std::filesystem::path synth_spec;
    std::filesystem::path out = "out";

    market::Schema schema;
    double malformed_threshold = 0.001;
    std::string index_id = "399001";
    CrashPeriods periods;

    std::size_t bins = 40;
    double pseudo_count = 0.5;
    std::size_t min_corr_bars = 30;
    std::size_t min_fit_samples = 50;
    int max_granger_lag = 5;
    ReturnMode granger_return_mode = ReturnMode::kPrevMinute;
    engine::CountMode count_mode = engine::CountMode::kPerBar;
    bool burstiness_tail_only = false;
    std::size_t verify_scenarios = 20;

    unsigned threads = 1;
    std::optional<std::uint64_t> seed;  // replaces the synth spec's seed when set

    // Throws Error(config) on unknown keys, wrong types or out-of-range values.
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::filesystem::path& path);

    // Every non-empty input path must exist (Error(config) otherwise). The
    // cache is an output of `ingest`, so it is not checked here.
    void validate_paths() const;

    // Canonical form (sorted keys). Omits `out` and `threads`, which do not
    // change any artifact content.
    nlohmann::json to_json() const;
    // 16 hex digits of FNV-1a over the canonical JSON dump.
    std::string hash() const;
};

// Applies "key=value" overrides to a JSON config object, converting the
// value to the key's type. Throws Error(config) for unknown keys.
// Keys accepted by apply_override, in config-file order.
std::vector<std::string> override_keys();

void apply_override(nlohmann::json& j, const std::string& key, const std::string& value);

const char* return_mode_name(ReturnMode m);

}  // namespace polarity::report
