#include "polarity/synth/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "polarity/common/error.hpp"
#include "polarity/market_data/trading_grid.hpp"
#include "polarity/market_data/transaction_reader.hpp"
#include "polarity/synth/samplers.hpp"

namespace polarity::synth {

using market::kBarsPerDay;

void ScenarioSpec::validate() const {
    auto fail = [](const std::string& why) { throw Error(ErrorCategory::kConfig, "synth spec: " + why); };
    if (n_stocks < 1) fail("n_stocks must be >= 1");
    if (n_days < 1) fail("n_days must be >= 1");
    if (!(base_price > 0.0) || !(index_level > 0.0)) fail("prices must be positive");
    if (index_noise < 0.0) fail("index_noise must be >= 0");
    if (offgrid_rows_per_stock_day < 0) fail("offgrid_rows_per_stock_day must be >= 0");
    if (plant_index_min_bar && (*plant_index_min_bar < 1 || *plant_index_min_bar > kBarsPerDay))
        fail("plant_index_min_bar must be within 1..237");
    if (regimes.empty()) fail("at least one regime is required");
    std::vector<int> cover(static_cast<std::size_t>(n_days) * kBarsPerDay, 0);
    for (const auto& r : regimes) {
        if (r.buy_rate < 0.0 || r.sell_rate < 0.0 || r.extra_fill_mean < 0.0 || r.return_noise < 0.0)
            fail("regime '" + r.name + "' has a negative rate");
        if (require_activity && r.buy_rate + r.sell_rate == 0.0)
            fail("regime '" + r.name + "' is infeasible: zero total rate with required activity");
        if (r.first_day < 0 || r.last_day >= n_days || r.first_day > r.last_day || r.first_bar < 1 ||
            r.last_bar > kBarsPerDay || r.first_bar > r.last_bar)
            fail("regime '" + r.name + "' has an invalid day or bar range");
        for (int d = r.first_day; d <= r.last_day; ++d)
            for (int b = r.first_bar; b <= r.last_bar; ++b) ++cover[static_cast<std::size_t>(d) * kBarsPerDay + b - 1];
    }
    for (std::size_t i = 0; i < cover.size(); ++i)
        if (cover[i] != 1)
            fail("regimes must cover each (day, bar) exactly once; day " + std::to_string(i / kBarsPerDay) + " bar " +
                 std::to_string(i % kBarsPerDay + 1) + " covered " + std::to_string(cover[i]) + " times");
}

ScenarioSpec parse_scenario_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::kConfig, std::string("synth spec is not valid JSON: ") + e.what());
    }
    ScenarioSpec spec;
    try {
        spec.seed = j.value("seed", spec.seed);
        spec.n_stocks = j.value("n_stocks", spec.n_stocks);
        spec.n_days = j.value("n_days", spec.n_days);
        if (j.contains("start_date")) {
            auto d = Date::parse(j.at("start_date").get<std::string>());
            if (!d) throw Error(ErrorCategory::kConfig, "synth spec: bad start_date");
            spec.start_date = *d;
        }
        spec.index_id = j.value("index_id", spec.index_id);
        spec.base_price = j.value("base_price", spec.base_price);
        spec.index_level = j.value("index_level", spec.index_level);
        spec.index_coupling = j.value("index_coupling", spec.index_coupling);
        spec.index_noise = j.value("index_noise", spec.index_noise);
        spec.offgrid_rows_per_stock_day = j.value("offgrid_rows_per_stock_day", spec.offgrid_rows_per_stock_day);
        if (j.contains("plant_index_min_bar")) spec.plant_index_min_bar = j.at("plant_index_min_bar").get<int>();
        spec.require_activity = j.value("require_activity", spec.require_activity);
        for (const auto& r : j.value("regimes", nlohmann::json::array())) {
            RegimeSpec reg;
            reg.name = r.value("name", reg.name);
            reg.buy_rate = r.value("buy_rate", reg.buy_rate);
            reg.sell_rate = r.value("sell_rate", reg.sell_rate);
            reg.extra_fill_mean = r.value("extra_fill_mean", reg.extra_fill_mean);
            reg.coupling = r.value("coupling", reg.coupling);
            reg.return_noise = r.value("return_noise", reg.return_noise);
            const auto days = r.value("days", std::vector<int>{0, spec.n_days - 1});
            const auto bars = r.value("bars", std::vector<int>{1, kBarsPerDay});
            if (days.size() != 2 || bars.size() != 2)
                throw Error(ErrorCategory::kConfig, "synth spec: days and bars are [first, last] pairs");
            reg.first_day = days[0];
            reg.last_day = days[1];
            reg.first_bar = bars[0];
            reg.last_bar = bars[1];
            spec.regimes.push_back(reg);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::kConfig, std::string("synth spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open synth spec " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_spec(ss.str());
}

std::vector<Date> trading_dates(Date start, int n_days) {
    std::vector<Date> out;
    for (std::int64_t s = start.serial(); static_cast<int>(out.size()) < n_days; ++s) {
        const Date d = Date::from_serial(s);
        if (d.weekday() != 0 && d.weekday() != 6) out.push_back(d);
    }
    return out;
}

namespace {

struct Participant {
    std::int32_t quote_ms;
    std::uint32_t stock;
    std::uint32_t seq;  // creation order within the day
    std::uint64_t serial = 0;
};

struct PendingTrade {
    std::int32_t time_ms;
    std::uint32_t stock;
    std::uint32_t seq;
    std::uint32_t buyer;   // index into participants
    std::uint32_t seller;
    int bar;               // 0 for off-grid
    double price;
    std::int64_t volume;
};

const RegimeSpec& regime_at(const ScenarioSpec& spec, int day, int bar) {
    for (const auto& r : spec.regimes)
        if (day >= r.first_day && day <= r.last_day && bar >= r.first_bar && bar <= r.last_bar) return r;
    throw Error(ErrorCategory::kConfig, "synth spec: no regime covers the cell");
}

std::string stock_symbol(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", i + 1);
    return buf;
}

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::int32_t> in_minute(0, 59'999);
    std::poisson_distribution<int> lot(2.0);

    Scenario sc;
    sc.dates = trading_dates(spec.start_date, spec.n_days);
    for (int s = 0; s < spec.n_stocks; ++s) sc.stock_ids.push_back(stock_symbol(s));

    std::vector<double> prev_close(static_cast<std::size_t>(spec.n_stocks));
    for (int s = 0; s < spec.n_stocks; ++s) prev_close[s] = spec.base_price * (1.0 + 0.01 * (s % 10));
    double index_prev_close = spec.index_level;

    for (int day = 0; day < spec.n_days; ++day) {
        const Date date = sc.dates[day];
        std::vector<Participant> participants;
        std::vector<PendingTrade> trades;
        std::uint32_t seq = 0;
        auto add_participant = [&](std::int32_t quote_ms, std::uint32_t stock) {
            participants.push_back({quote_ms, stock, seq++});
            return static_cast<std::uint32_t>(participants.size() - 1);
        };

        // Per-bar market polarity accumulators for the index.
        std::vector<double> polarity_sum(kBarsPerDay, 0.0);
        std::vector<int> polarity_n(kBarsPerDay, 0);

        for (int s = 0; s < spec.n_stocks; ++s) {
            const auto stock = static_cast<std::uint32_t>(s);
            for (int k = 0; k < spec.offgrid_rows_per_stock_day; ++k) {
                const auto auction = TimeOfDay::hms(9, 25, 0).millis();
                const auto b = add_participant(TimeOfDay::hms(9, 15, 0).millis() + k, stock);
                const auto sl = add_participant(TimeOfDay::hms(9, 15, 0).millis() + k, stock);
                trades.push_back({auction, stock, seq++, b, sl, 0, prev_close[s], 100});
            }
            double price = prev_close[s];
            for (int bar = 1; bar <= kBarsPerDay; ++bar) {
                const auto& regime = regime_at(spec, day, bar);
                std::uint32_t buyers = static_cast<std::uint32_t>(std::poisson_distribution<int>(regime.buy_rate)(rng));
                std::uint32_t sellers = static_cast<std::uint32_t>(std::poisson_distribution<int>(regime.sell_rate)(rng));
                // Every trade has a counterparty on each side.
                if (buyers == 0 && sellers > 0) buyers = 1;
                if (sellers == 0 && buyers > 0) sellers = 1;
                if (buyers == 0) continue;

                const std::int32_t bar_ms = market::bar_start(bar).millis();
                std::poisson_distribution<int> extra(regime.extra_fill_mean);
                std::vector<std::uint32_t> buy_fills, sell_fills;
                for (std::uint32_t i = 0; i < buyers; ++i) {
                    const auto p = add_participant(bar_ms + in_minute(rng), stock);
                    buy_fills.insert(buy_fills.end(), 1 + static_cast<std::size_t>(extra(rng)), p);
                }
                for (std::uint32_t i = 0; i < sellers; ++i) {
                    const auto p = add_participant(bar_ms + in_minute(rng), stock);
                    sell_fills.insert(sell_fills.end(), 1 + static_cast<std::size_t>(extra(rng)), p);
                }
                // Pad the shorter side with extra partial fills of its orders.
                const std::size_t n_trades = std::max(buy_fills.size(), sell_fills.size());
                for (std::size_t i = 0; buy_fills.size() < n_trades; ++i) buy_fills.push_back(buy_fills[i]);
                for (std::size_t i = 0; sell_fills.size() < n_trades; ++i) sell_fills.push_back(sell_fills[i]);
                std::shuffle(buy_fills.begin(), buy_fills.end(), rng);
                std::shuffle(sell_fills.begin(), sell_fills.end(), rng);

                const double pol = (static_cast<double>(buyers) - sellers) / (static_cast<double>(buyers) + sellers);
                price *= std::exp(regime.coupling * pol + regime.return_noise * normal(rng));
                for (std::size_t i = 0; i < n_trades; ++i)
                    trades.push_back({bar_ms + in_minute(rng), stock, seq++, buy_fills[i], sell_fills[i], bar, price,
                                      100 * (1 + static_cast<std::int64_t>(lot(rng)))});

                polarity_sum[bar - 1] += pol;
                ++polarity_n[bar - 1];
                sc.truth.cells.push_back({sc.stock_ids[s], date, bar, buyers, sellers});
                sc.intraday.push_back({date, sc.stock_ids[s], bar, price});
            }
            sc.eod.push_back({date, sc.stock_ids[s], price});
            prev_close[s] = price;
        }

        // Index path driven by market polarity. A planted low sits 5% under
        // the lowest level of the unplanted path; the next bar undoes it.
        std::vector<double> r(kBarsPerDay);
        for (int bar = 1; bar <= kBarsPerDay; ++bar) {
            const double mp = polarity_n[bar - 1] > 0 ? polarity_sum[bar - 1] / polarity_n[bar - 1] : 0.0;
            r[bar - 1] = spec.index_coupling * mp + spec.index_noise * normal(rng);
        }
        if (spec.plant_index_min_bar) {
            const int k = *spec.plant_index_min_bar;
            double cum = 0.0, lowest = 0.0, at_k = 0.0;
            for (int bar = 1; bar <= kBarsPerDay; ++bar) {
                cum += r[bar - 1];
                if (bar == 1 || cum < lowest) lowest = cum;
                if (bar == k) at_k = cum;
            }
            const double drop = at_k - lowest + 0.05;
            r[k - 1] -= drop;
            if (k < kBarsPerDay) r[k] += drop;
        }
        double level = index_prev_close;
        int min_bar = 1;
        double min_level = 0.0;
        for (int bar = 1; bar <= kBarsPerDay; ++bar) {
            level *= std::exp(r[bar - 1]);
            if (bar == 1 || level < min_level) {
                min_level = level;
                min_bar = bar;
            }
            sc.intraday.push_back({date, spec.index_id, bar, level});
        }
        sc.eod.push_back({date, spec.index_id, level});
        sc.truth.index_min_bar.emplace_back(date, min_bar);
        index_prev_close = level;

        // Serials follow quote time across all stocks.
        std::vector<std::uint32_t> order(participants.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& pa = participants[a];
            const auto& pb = participants[b];
            return pa.quote_ms != pb.quote_ms ? pa.quote_ms < pb.quote_ms : pa.seq < pb.seq;
        });
        for (std::size_t rank = 0; rank < order.size(); ++rank) participants[order[rank]].serial = rank + 1;

        std::sort(trades.begin(), trades.end(), [](const PendingTrade& a, const PendingTrade& b) {
            return a.time_ms != b.time_ms ? a.time_ms < b.time_ms : a.seq < b.seq;
        });
        for (const auto& t : trades) {
            market::TransactionRecord r;
            r.trade_date = date;
            r.stock_id = sc.stock_ids[t.stock];
            r.timestamp = TimeOfDay(t.time_ms);
            // Quoted to 0.001.
            r.price = std::round(t.price * 1000.0) / 1000.0;
            r.volume = t.volume;
            r.buy_serial = participants[t.buyer].serial;
            r.sell_serial = participants[t.seller].serial;
            if (t.bar != 0) r.bar = t.bar;
            sc.transactions.push_back(std::move(r));
        }
    }
    std::sort(sc.truth.cells.begin(), sc.truth.cells.end(), [](const TruthCell& a, const TruthCell& b) {
        return std::tie(a.date, a.stock_id, a.bar) < std::tie(b.date, b.stock_id, b.bar);
    });
    return sc;
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    market::write_transactions(dir / "transactions.csv", scenario.transactions);
    market::write_eod_prices(dir / "eod.csv", scenario.eod);
    market::write_intraday_prices(dir / "intraday.csv", scenario.intraday);
    std::ofstream out(dir / "ground_truth.csv", std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write ground truth in " + dir.string());
    out << "stock_id,date,bar,buyers,sellers\n";
    for (const auto& c : scenario.truth.cells)
        out << c.stock_id << ',' << c.date.to_string() << ',' << c.bar << ',' << c.buyers << ',' << c.sellers << '\n';
    std::ofstream mins(dir / "index_min_bar.csv", std::ios::binary);
    mins << "date,bar\n";
    for (const auto& [d, b] : scenario.truth.index_min_bar) mins << d.to_string() << ',' << b << '\n';
}

}  // namespace polarity::synth
