#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarity/common/date.hpp"
#include "polarity/market_data/price_files.hpp"
#include "polarity/market_data/transaction.hpp"

namespace polarity::synth {

// Activity and price dynamics for a block of (day, bar) cells.
struct RegimeSpec {
    std::string name = "base";
    double buy_rate = 10.0;         // Poisson mean of distinct buyers per stock-bar
    double sell_rate = 10.0;        // Poisson mean of distinct sellers per stock-bar
    double extra_fill_mean = 0.5;   // fills per participant = 1 + Poisson(extra_fill_mean)
    double coupling = 0.0;          // stock log-return per unit of polarity
    double return_noise = 0.001;    // stock log-return noise sd per bar
    int first_day = 0;              // 0-based trading-day index, inclusive
    int last_day = 0;
    int first_bar = 1;              // inclusive, 1..237
    int last_bar = 237;
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    int n_stocks = 10;
    Date start_date = Date::from_ymd(2015, 5, 4);
    int n_days = 1;
    std::string index_id = "399001";
    double base_price = 10.0;
    double index_level = 10000.0;
    double index_coupling = -0.002;  // index log-return per unit of market polarity
    double index_noise = 0.0005;
    int offgrid_rows_per_stock_day = 0;  // auction-time records, outside the grid
    std::optional<int> plant_index_min_bar;  // forces the index low at this bar
    bool require_activity = false;           // reject regimes with zero total rate
    std::vector<RegimeSpec> regimes;

    // Throws Error(config): rates < 0, bad ranges, or regimes that do not
    // cover every (day, bar) exactly once.
    void validate() const;
};

// Reads the JSON schema documented in the README ("synth" section).
ScenarioSpec load_scenario_spec(const std::filesystem::path& path);
ScenarioSpec parse_scenario_spec(const std::string& json_text);

struct TruthCell {
    std::string stock_id;
    Date date;
    int bar = 1;
    std::uint32_t buyers = 0;
    std::uint32_t sellers = 0;

    bool operator==(const TruthCell&) const = default;
};

struct GroundTruth {
    std::vector<TruthCell> cells;  // non-empty cells, ordered by (date, stock, bar)
    std::vector<std::pair<Date, int>> index_min_bar;
    bool operator==(const GroundTruth&) const = default;
};

struct Scenario {
    std::vector<Date> dates;
    std::vector<std::string> stock_ids;
    std::vector<market::TransactionRecord> transactions;  // feed order: date, time
    std::vector<market::EodPrice> eod;
    std::vector<market::IntradayPrice> intraday;
    GroundTruth truth;
};

// Weekdays starting at `start` (inclusive).
std::vector<Date> trading_dates(Date start, int n_days);

// Deterministic given spec.seed. Serials are assigned per day in quote-time
// order across all stocks, starting at 1 each day; every fill of a
// participant repeats its serial.
Scenario generate(const ScenarioSpec& spec);

// Writes transactions.csv, eod.csv, intraday.csv, ground_truth.csv and
// index_min_bar.csv.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace polarity::synth
