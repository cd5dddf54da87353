#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polarity/engine/polarity.hpp"
#include "polarity/market_data/binary_cache.hpp"
#include "polarity/market_data/trading_grid.hpp"

namespace polarity::engine {

// Man-times and polarity per (stock, day, bar). Axes are sorted (stocks by
// symbol, dates chronologically) and hold only stocks/dates that had at
// least one on-grid trade. A cell with no trades has missing polarity.
// Read-only after construction; safe to query from several threads.
class PolarityPanel {
public:
    struct CellCount {
        std::string stock_id;
        Date date;
        int bar = 1;
        ManTimes counts;
    };

    PolarityPanel() = default;
    PolarityPanel(std::vector<std::string> stocks, std::vector<Date> dates);

    // Builds a panel from explicit non-empty cells. Duplicate cells or bars
    // outside 1..237 throw Error(data).
    static PolarityPanel from_counts(const std::vector<CellCount>& cells);

    const std::vector<std::string>& stocks() const { return stocks_; }
    const std::vector<Date>& dates() const { return dates_; }
    std::optional<std::size_t> stock_index(std::string_view id) const;
    std::optional<std::size_t> date_index(Date d) const;

    ManTimes counts(std::size_t stock, std::size_t date, int bar) const {
        return cells_[offset(stock, date, bar)];
    }
    std::optional<double> polarity(std::size_t stock, std::size_t date, int bar) const {
        return engine::polarity(counts(stock, date, bar));
    }
    // All 237 polarities of one stock-day.
    market::BarArray<std::optional<double>> row(std::size_t stock, std::size_t date) const;

    void set_counts(std::size_t stock, std::size_t date, int bar, ManTimes m) { cells_[offset(stock, date, bar)] = m; }

    std::size_t non_empty_cells() const;
    bool empty() const { return stocks_.empty(); }

    bool operator==(const PolarityPanel&) const = default;

private:
    std::size_t offset(std::size_t stock, std::size_t date, int bar) const {
        return (stock * dates_.size() + date) * market::kBarsPerDay + static_cast<std::size_t>(bar - 1);
    }

    std::vector<std::string> stocks_;
    std::vector<Date> dates_;
    std::vector<ManTimes> cells_;
};

enum class CountMode {
    kPerBar,  // a serial counts once in every bar it trades in
    kPerDay,  // a serial counts once per day, in the first bar it trades in
};

// Accumulates trades in any order and produces a PolarityPanel. Off-grid
// records are counted and otherwise ignored.
class PanelBuilder {
public:
    explicit PanelBuilder(CountMode mode = CountMode::kPerBar) : mode_(mode) {}

    void add(const market::TransactionRecord& r);
    void add(const market::CacheBlock& block);

    // Sorts and counts each stock-day, parallel over stock-days.
    PolarityPanel build(unsigned threads = 1) const;

    std::uint64_t on_grid_records() const { return on_grid_; }
    std::uint64_t off_grid_records() const { return off_grid_; }

private:
    struct Entry {
        std::uint64_t serial;
        std::uint16_t bar;
    };
    struct DayAccumulator {
        std::vector<Entry> buys;
        std::vector<Entry> sells;
    };
    struct Key {
        std::uint32_t stock;
        Date date;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<std::uint64_t>{}((std::uint64_t{k.stock} << 32) ^ static_cast<std::uint32_t>(k.date.yyyymmdd()));
        }
    };

    DayAccumulator& accumulator(const std::string& stock, Date date);

    CountMode mode_;
    std::unordered_map<std::string, std::uint32_t> stock_ids_;
    std::vector<std::string> stock_names_;
    std::unordered_map<Key, DayAccumulator, KeyHash> days_;
    std::uint64_t on_grid_ = 0;
    std::uint64_t off_grid_ = 0;
};

}  // namespace polarity::engine
