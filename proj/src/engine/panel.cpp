#include "polarity/engine/panel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "polarity/common/error.hpp"
#include "polarity/common/parallel.hpp"

namespace polarity::engine {

using market::kBarsPerDay;

PolarityPanel::PolarityPanel(std::vector<std::string> stocks, std::vector<Date> dates)
    : stocks_(std::move(stocks)), dates_(std::move(dates)) {
    std::sort(stocks_.begin(), stocks_.end());
    std::sort(dates_.begin(), dates_.end());
    if (std::adjacent_find(stocks_.begin(), stocks_.end()) != stocks_.end() ||
        std::adjacent_find(dates_.begin(), dates_.end()) != dates_.end())
        throw Error(ErrorCategory::kData, "panel axes must not contain duplicates");
    cells_.assign(stocks_.size() * dates_.size() * kBarsPerDay, ManTimes{});
}

PolarityPanel PolarityPanel::from_counts(const std::vector<CellCount>& cells) {
    std::vector<std::string> stocks;
    std::vector<Date> dates;
    for (const auto& c : cells) {
        if (c.counts.total() == 0) continue;
        stocks.push_back(c.stock_id);
        dates.push_back(c.date);
    }
    std::sort(stocks.begin(), stocks.end());
    stocks.erase(std::unique(stocks.begin(), stocks.end()), stocks.end());
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    PolarityPanel panel(std::move(stocks), std::move(dates));
    for (const auto& c : cells) {
        if (c.counts.total() == 0) continue;
        if (c.bar < 1 || c.bar > kBarsPerDay)
            throw Error(ErrorCategory::kData, "bar " + std::to_string(c.bar) + " outside 1..237");
        const auto s = *panel.stock_index(c.stock_id);
        const auto d = *panel.date_index(c.date);
        if (panel.counts(s, d, c.bar).total() != 0)
            throw Error(ErrorCategory::kData, "duplicate cell " + c.stock_id + " " + c.date.to_string() + " bar " +
                                                  std::to_string(c.bar));
        panel.set_counts(s, d, c.bar, c.counts);
    }
    return panel;
}

std::optional<std::size_t> PolarityPanel::stock_index(std::string_view id) const {
    auto it = std::lower_bound(stocks_.begin(), stocks_.end(), id);
    if (it == stocks_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - stocks_.begin());
}

std::optional<std::size_t> PolarityPanel::date_index(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

market::BarArray<std::optional<double>> PolarityPanel::row(std::size_t stock, std::size_t date) const {
    market::BarArray<std::optional<double>> out;
    const std::size_t base = offset(stock, date, 1);
    for (int b = 0; b < kBarsPerDay; ++b) out[b] = engine::polarity(cells_[base + b]);
    return out;
}

std::size_t PolarityPanel::non_empty_cells() const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const ManTimes& m) { return m.total() != 0; }));
}

PanelBuilder::DayAccumulator& PanelBuilder::accumulator(const std::string& stock, Date date) {
    auto [it, inserted] = stock_ids_.try_emplace(stock, static_cast<std::uint32_t>(stock_names_.size()));
    if (inserted) stock_names_.push_back(stock);
    return days_[Key{it->second, date}];
}

void PanelBuilder::add(const market::TransactionRecord& r) {
    if (r.off_grid()) {
        ++off_grid_;
        return;
    }
    ++on_grid_;
    auto& acc = accumulator(r.stock_id, r.trade_date);
    const auto bar = static_cast<std::uint16_t>(*r.bar);
    acc.buys.push_back({r.buy_serial, bar});
    acc.sells.push_back({r.sell_serial, bar});
}

void PanelBuilder::add(const market::CacheBlock& block) {
    DayAccumulator* acc = nullptr;
    for (std::size_t i = 0; i < block.size(); ++i) {
        const auto bar = block.bar[i];
        if (bar == 0) {
            ++off_grid_;
            continue;
        }
        if (!acc) acc = &accumulator(block.stock_id, block.date);
        ++on_grid_;
        acc->buys.push_back({block.buy_serial[i], bar});
        acc->sells.push_back({block.sell_serial[i], bar});
    }
}

namespace {

// Distinct serials per bar; `entries` is reordered.
template <typename Entry>
market::BarArray<std::uint32_t> count_side(std::vector<Entry>& entries, CountMode mode) {
    market::BarArray<std::uint32_t> counts{};
    if (mode == CountMode::kPerBar) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.bar != b.bar ? a.bar < b.bar : a.serial < b.serial;
        });
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (i == 0 || entries[i].bar != entries[i - 1].bar || entries[i].serial != entries[i - 1].serial)
                ++counts[entries[i].bar - 1];
    } else {
        // First bar of each serial within the day.
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.serial != b.serial ? a.serial < b.serial : a.bar < b.bar;
        });
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (i == 0 || entries[i].serial != entries[i - 1].serial) ++counts[entries[i].bar - 1];
    }
    return counts;
}

}  // namespace

PolarityPanel PanelBuilder::build(unsigned threads) const {
    std::vector<std::string> stocks;
    std::vector<Date> dates;
    std::vector<std::pair<Key, const DayAccumulator*>> work;
    work.reserve(days_.size());
    for (const auto& [key, acc] : days_) {
        work.emplace_back(key, &acc);
        dates.push_back(key.date);
    }
    for (const auto& [name, id] : stock_ids_) {
        (void)id;
        stocks.push_back(name);
    }
    std::sort(dates.begin(), dates.end());
    dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
    PolarityPanel panel(std::move(stocks), std::move(dates));

    // Each stock-day writes a disjoint slice of the panel.
    parallel_for(work.size(), threads, [&](std::size_t i) {
        const auto& [key, acc] = work[i];
        auto buys = acc->buys;
        auto sells = acc->sells;
        const auto buy_counts = count_side(buys, mode_);
        const auto sell_counts = count_side(sells, mode_);
        const auto s = *panel.stock_index(stock_names_[key.stock]);
        const auto d = *panel.date_index(key.date);
        for (int b = 1; b <= kBarsPerDay; ++b)
            panel.set_counts(s, d, b, ManTimes{buy_counts[b - 1], sell_counts[b - 1]});
    });
    return panel;
}

}  // namespace polarity::engine
