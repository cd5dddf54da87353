#include "polarity/report/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "polarity/common/format.hpp"
#include "polarity/common/parallel.hpp"
#include "polarity/coupling/corr_dist.hpp"
#include "polarity/coupling/emotion.hpp"
#include "polarity/coupling/granger.hpp"
#include "polarity/coupling/pearson.hpp"
#include "polarity/coupling/price_impact.hpp"
#include "polarity/engine/direction_ratios.hpp"
#include "polarity/engine/market_polarity.hpp"
#include "polarity/engine/panel.hpp"
#include "polarity/engine/returns.hpp"
#include "polarity/flips/flip_analytics.hpp"
#include "polarity/market_data/binary_cache.hpp"
#include "polarity/market_data/price_files.hpp"
#include "polarity/market_data/transaction_reader.hpp"
#include "polarity/report/table.hpp"
#include "polarity/report/verify.hpp"
#include "polarity/synth/scenario.hpp"
#include "polarity/tailfit/burstiness.hpp"
#include "polarity/tailfit/power_law.hpp"

namespace polarity::report {

namespace {

using market::kBarsPerDay;
using Series = market::BarArray<std::optional<double>>;

const char* kGridDecision = "bars are 237 half-open minutes (09:30-11:30, 13:00-14:57); records outside the grid are dropped";
const char* kMissingDecision = "a bar with no trades has missing polarity and is excluded from every statistic";

std::string fmt(double v) { return format_double(v); }
std::string fmt(const std::optional<double>& v) { return format_double(v); }
template <typename T>
std::string num(T v) { return std::to_string(v); }

std::string limit_name(engine::LimitStatus s) {
    switch (s) {
        case engine::LimitStatus::kWithin: return "within";
        case engine::LimitStatus::kAtLimit: return "at-limit";
        case engine::LimitStatus::kBeyondLimit: return "beyond-limit";
    }
    return "within";
}

std::string count_decision(const RunConfig& c) {
    return c.count_mode == engine::CountMode::kPerBar
               ? "man-times = distinct order serials per side within each bar"
               : "man-times = distinct order serials per side per day, credited to the first bar a serial trades in";
}

class Workspace {
public:
    Workspace(const RunConfig& config, std::ostream& log) : config_(config), log_(log), hash_(config.hash()) {}

    const RunConfig& config() const { return config_; }

    const engine::PolarityPanel& panel() {
        if (panel_) return *panel_;
        engine::PanelBuilder builder(config_.count_mode);
        if (!config_.cache.empty() && std::filesystem::exists(config_.cache)) {
            market::CacheReader reader(config_.cache);
            market::CacheBlock block;
            while (reader.next(block)) builder.add(block);
            log_ << "read " << reader.records_read() << " records from cache " << config_.cache.string() << '\n';
        } else if (!config_.transactions.empty()) {
            market::ReaderOptions options;
            options.malformed_threshold = config_.malformed_threshold;
            const auto summary = market::for_each_transaction(
                config_.transactions, config_.schema, [&](const market::TransactionRecord& r) { builder.add(r); },
                options);
            log_ << "parsed " << summary.describe() << '\n';
        } else {
            throw Error(ErrorCategory::kConfig, "no transactions file or cache configured");
        }
        panel_ = builder.build(config_.threads);
        log_ << "panel: " << panel_->stocks().size() << " stocks x " << panel_->dates().size() << " days, "
             << panel_->non_empty_cells() << " non-empty cells\n";
        if (panel_->empty()) throw Error(ErrorCategory::kData, "no on-grid transactions in input");
        return *panel_;
    }

    const std::map<std::string, engine::ReturnSeries>& returns() {
        if (returns_) return *returns_;
        if (config_.eod_prices.empty() || config_.intraday_prices.empty())
            throw Error(ErrorCategory::kConfig, "eod_prices and intraday_prices are required for this command");
        const auto eod = market::read_eod_prices(config_.eod_prices);
        const auto intraday = market::read_intraday_prices(config_.intraday_prices);
        returns_ = engine::compute_returns(eod, intraday);
        return *returns_;
    }

    const engine::ReturnSeries* stock_returns(const std::string& id) {
        const auto& all = returns();
        auto it = all.find(id);
        return it == all.end() ? nullptr : &it->second;
    }

    const engine::ReturnSeries& index_returns() {
        const auto* r = stock_returns(config_.index_id);
        if (!r) throw Error(ErrorCategory::kData, "index " + config_.index_id + " has no prices");
        return *r;
    }

    // Market polarity of every panel date, computed once.
    const std::vector<market::BarArray<engine::MarketPolarityCell>>& market() {
        if (market_) return *market_;
        const auto& p = panel();
        std::vector<market::BarArray<engine::MarketPolarityCell>> days(p.dates().size());
        parallel_for(days.size(), config_.threads, [&](std::size_t d) { days[d] = engine::market_polarity_day(p, d); });
        market_ = std::move(days);
        return *market_;
    }

    Table table(std::string name, std::string units, std::vector<std::string> decisions,
                std::vector<std::string> columns) const {
        Table t;
        t.name = std::move(name);
        t.config_hash = hash_;
        t.units = std::move(units);
        t.decisions = std::move(decisions);
        t.columns = std::move(columns);
        return t;
    }

    std::filesystem::path write(const Table& t) {
        auto path = config_.out / (t.name + ".csv");
        write_table(path, t);
        log_ << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
        return path;
    }

    // Labelled periods covering the panel's dates, "all" first.
    std::vector<Period> periods() {
        const auto& dates = panel().dates();
        const auto& cp = config_.periods;
        const Date first = dates.front(), last = dates.back();
        const Date after_pre = Date::from_serial(cp.pre_crash_end.serial() + 1);
        const Date after_crash = Date::from_serial(cp.crash_end.serial() + 1);
        return {
            {"all", first, last},
            {CrashPeriods::kPreCrash, first, cp.pre_crash_end},
            {CrashPeriods::kCrash, after_pre, cp.crash_end},
            {CrashPeriods::kPostCrash, after_crash, last},
        };
    }

    std::ostream& log() { return log_; }

private:
    const RunConfig& config_;
    std::ostream& log_;
    std::string hash_;
    std::optional<engine::PolarityPanel> panel_;
    std::optional<std::map<std::string, engine::ReturnSeries>> returns_;
    std::optional<std::vector<market::BarArray<engine::MarketPolarityCell>>> market_;
};

using Artifacts = std::vector<std::filesystem::path>;

Series bar_series(const std::map<Date, engine::BarSeries>& m, Date d) {
    auto it = m.find(d);
    return it == m.end() ? Series{} : it->second;
}

Artifacts cmd_ingest(Workspace& ws) {
    const auto& c = ws.config();
    if (c.transactions.empty()) throw Error(ErrorCategory::kConfig, "ingest needs a transactions path");
    if (c.cache.empty()) throw Error(ErrorCategory::kConfig, "ingest needs a cache path");
    if (c.cache.has_parent_path()) std::filesystem::create_directories(c.cache.parent_path());
    const auto summary = market::build_cache(c.transactions, c.schema, c.cache, c.malformed_threshold);
    ws.log() << "cached " << summary.describe() << '\n';
    auto t = ws.table("ingest", "counts of rows", {kGridDecision}, {"data_rows", "parsed", "malformed", "off_grid", "malformed_fraction"});
    t.add({num(summary.data_rows), num(summary.parsed), num(summary.malformed), num(summary.off_grid),
           fmt(summary.malformed_fraction())});
    return {c.cache, ws.write(t)};
}

Artifacts cmd_polarity(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    Artifacts out;

    auto panel_table = ws.table("panel", "buy/sell in man-times; polarity dimensionless in [-1,1]",
                                {count_decision(c), kGridDecision, kMissingDecision},
                                {"stock", "date", "bar", "buy", "sell", "polarity"});
    const auto panel_path = c.out / "panel.csv";
    TableStream stream(panel_path, panel_table);
    for (std::size_t s = 0; s < p.stocks().size(); ++s)
        for (std::size_t d = 0; d < p.dates().size(); ++d) {
            const std::string date = p.dates()[d].to_string();
            for (int b = 1; b <= kBarsPerDay; ++b) {
                const auto m = p.counts(s, d, b);
                stream.row({p.stocks()[s], date, num(b), num(m.buy), num(m.sell), fmt(engine::polarity(m))});
            }
        }
    stream.close();
    ws.log() << "wrote " << panel_path.string() << " (" << stream.rows() << " rows)\n";
    out.push_back(panel_path);

    auto mt = ws.table("moments", "polarity dimensionless; n in stock-minutes",
                       {"std uses the n-1 denominator", "kurtosis is excess kurtosis (normal = 0) from population moments",
                        kMissingDecision},
                       {"period", "n", "mean", "std", "excess_kurtosis"});
    for (const auto& period : ws.periods()) {
        std::vector<double> values;
        for (std::size_t d = 0; d < p.dates().size(); ++d) {
            if (!period.contains(p.dates()[d])) continue;
            for (std::size_t s = 0; s < p.stocks().size(); ++s)
                for (int b = 1; b <= kBarsPerDay; ++b)
                    if (auto v = p.polarity(s, d, b)) values.push_back(*v);
        }
        if (values.empty()) continue;
        const auto m = engine::moments(values);
        mt.add({period.label, num(m.n), fmt(m.mean), fmt(m.std), fmt(m.excess_kurtosis)});
    }
    out.push_back(ws.write(mt));

    coupling::BinGrid grid{c.bins, -1.0, 1.0, 0.0};
    std::vector<std::size_t> counts(grid.bins, 0);
    std::size_t total = 0;
    for (std::size_t s = 0; s < p.stocks().size(); ++s)
        for (std::size_t d = 0; d < p.dates().size(); ++d)
            for (int b = 1; b <= kBarsPerDay; ++b)
                if (auto v = p.polarity(s, d, b)) {
                    ++counts[grid.bin_of(*v)];
                    ++total;
                }
    auto ht = ws.table("polarity_hist", "density per unit polarity", {"equal-width bins on [-1,1], last bin closed", kMissingDecision},
                       {"bin_lo", "bin_hi", "count", "density"});
    const double width = 2.0 / static_cast<double>(grid.bins);
    for (std::size_t i = 0; i < grid.bins; ++i) {
        const double lo = -1.0 + width * static_cast<double>(i);
        const double density = total ? static_cast<double>(counts[i]) / (static_cast<double>(total) * width) : 0.0;
        ht.add({fmt(lo), fmt(i + 1 == grid.bins ? 1.0 : lo + width), num(counts[i]), fmt(density)});
    }
    out.push_back(ws.write(ht));
    return out;
}

std::map<std::string, double> read_capitalization(const std::filesystem::path& path) {
    std::map<std::string, double> caps;
    for (const auto& row : read_table(path)) {
        if (row.size() != 2) throw Error(ErrorCategory::kData, path.string() + ": expected id,capitalization rows");
        if (caps.empty() && row[0] == "id") continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(row[1], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != row[1].size() || !(v > 0.0))
            throw Error(ErrorCategory::kData, path.string() + ": bad capitalization for " + row[0]);
        caps[row[0]] = v;
    }
    return caps;
}

Artifacts cmd_ratios(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    std::map<std::string, double> caps;
    if (!c.capitalization.empty()) caps = read_capitalization(c.capitalization);
    auto t = ws.table("ratios", "ratios are fractions of non-missing stock-minutes; capitalization as supplied",
                      {kMissingDecision, "zero polarity counts in its own class"},
                      {"stock", "period", "pos_ratio", "neg_ratio", "zero_ratio", "n", "capitalization"});
    const auto periods = ws.periods();
    for (std::size_t s = 0; s < p.stocks().size(); ++s) {
        const auto cap = caps.find(p.stocks()[s]);
        for (const auto& period : periods) {
            auto r = engine::direction_ratios(p, s, period);
            if (!r) continue;
            t.add({p.stocks()[s], period.label, fmt(r->pos_ratio), fmt(r->neg_ratio), fmt(r->zero_ratio), num(r->n),
                   cap == caps.end() ? "NA" : fmt(cap->second)});
        }
    }
    return {ws.write(t)};
}

struct StockDay {
    std::size_t stock;
    std::size_t date;
};

std::vector<StockDay> stock_days(const engine::PolarityPanel& p) {
    std::vector<StockDay> out;
    out.reserve(p.stocks().size() * p.dates().size());
    for (std::size_t d = 0; d < p.dates().size(); ++d)
        for (std::size_t s = 0; s < p.stocks().size(); ++s) out.push_back({s, d});
    return out;
}

Artifacts cmd_flips(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    const bool have_prices = !c.eod_prices.empty() && !c.intraday_prices.empty();
    if (have_prices) ws.returns();
    const auto days = stock_days(p);
    std::vector<std::optional<flips::DailyFlipSummary>> summaries(days.size());
    parallel_for(days.size(), c.threads, [&](std::size_t i) {
        const auto row = p.row(days[i].stock, days[i].date);
        const auto fs = flips::build_flip_series(row, p.stocks()[days[i].stock], p.dates()[days[i].date]);
        if (fs.effective_length > 0) summaries[i] = flips::flip_stats(fs);
    });

    const std::vector<std::string> decisions = {
        "zeros and missing bars are removed before counting flips",
        "flip depth sums |jump| across each sign change of the zero-removed series",
        "standardized flips = flip_count / non-missing bars; averaged depth = depth / flip_count",
        "limit status uses a 10% daily limit with 0.001 tolerance"};
    auto t = ws.table("flips", "counts; depth in polarity units; daily_return as a fraction", decisions,
                      {"stock", "date", "period", "flip_count", "effective_length", "standardized_flips", "depth",
                       "averaged_depth", "daily_return", "limit_status"});
    std::map<std::size_t, std::vector<double>> depth_by_date;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (!summaries[i]) continue;
        const auto& f = *summaries[i];
        std::optional<double> daily;
        std::string limit = "NA";
        if (have_prices) {
            if (const auto* r = ws.stock_returns(f.stock_id)) {
                daily = r->daily_pct(f.trade_date);
                if (daily) limit = limit_name(engine::classify_limit(*daily));
            }
        }
        t.add({f.stock_id, f.trade_date.to_string(), c.periods.label(f.trade_date), num(f.flip_count),
               num(f.effective_length), fmt(f.standardized_flips), fmt(f.depth), fmt(f.averaged_depth), fmt(daily),
               limit});
        if (f.averaged_depth) depth_by_date[days[i].date].push_back(*f.averaged_depth);
    }
    Artifacts out{ws.write(t)};

    auto box = ws.table("depth_box", "averaged depth in polarity units",
                        {"quantiles interpolate linearly between order statistics",
                         "whiskers are the most extreme points within 1.5 IQR of the quartiles",
                         "stock-days without flips have no averaged depth and are left out"},
                        {"date", "period", "n", "q1", "median", "q3", "lower_whisker", "upper_whisker", "n_outliers"});
    for (const auto& [d, values] : depth_by_date) {
        auto s = coupling::five_number_summary(values);
        if (!s) continue;
        const Date date = p.dates()[d];
        box.add({date.to_string(), c.periods.label(date), num(s->n), fmt(s->q1), fmt(s->median), fmt(s->q3),
                 fmt(s->lower_whisker), fmt(s->upper_whisker), num(s->n_outliers)});
    }
    out.push_back(ws.write(box));
    return out;
}

// Run lengths of every stock-day, grouped by date index.
std::vector<std::vector<flips::RunLengthSample>> collect_runs(Workspace& ws) {
    const auto& p = ws.panel();
    const auto days = stock_days(p);
    std::vector<std::vector<flips::RunLengthSample>> per_day(days.size());
    parallel_for(days.size(), ws.config().threads, [&](std::size_t i) {
        const auto row = p.row(days[i].stock, days[i].date);
        per_day[i] = flips::run_lengths(flips::build_flip_series(row, p.stocks()[days[i].stock], p.dates()[days[i].date]));
    });
    std::vector<std::vector<flips::RunLengthSample>> by_date(p.dates().size());
    for (std::size_t i = 0; i < days.size(); ++i)
        for (auto& r : per_day[i]) by_date[days[i].date].push_back(std::move(r));
    return by_date;
}

const char* kRunDecision = "run length counts positions of the zero-removed series; runs touching the open or close are censored";

Artifacts cmd_runlengths(Workspace& ws) {
    const auto& p = ws.panel();
    const auto by_date = collect_runs(ws);
    auto t = ws.table("runlengths", "length in minutes with nonzero polarity", {kRunDecision},
                      {"stock", "date", "sign", "length"});
    auto pdf = ws.table("runlength_pdf", "probability per length", {kRunDecision},
                        {"date", "sign", "length", "count", "probability"});
    for (std::size_t d = 0; d < by_date.size(); ++d) {
        std::map<std::size_t, std::size_t> hist[2];
        std::size_t total[2] = {0, 0};
        for (const auto& r : by_date[d]) {
            t.add({r.stock_id, r.trade_date.to_string(), flips::sign_name(r.sign), num(r.length)});
            const int k = r.sign == flips::Sign::kPositive ? 0 : 1;
            ++hist[k][r.length];
            ++total[k];
        }
        for (int k = 0; k < 2; ++k)
            for (const auto& [len, count] : hist[k])
                pdf.add({p.dates()[d].to_string(), k == 0 ? "positive" : "negative", num(len), num(count),
                         fmt(static_cast<double>(count) / static_cast<double>(total[k]))});
    }
    return {ws.write(t), ws.write(pdf)};
}

Artifacts cmd_fit(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    const auto by_date = collect_runs(ws);

    struct Job {
        std::string date;
        flips::Sign sign;
        std::vector<std::int64_t> lengths;
    };
    std::vector<Job> jobs;
    std::vector<std::int64_t> all[2];
    for (std::size_t d = 0; d < by_date.size(); ++d) {
        Job pos{p.dates()[d].to_string(), flips::Sign::kPositive, {}};
        Job neg{p.dates()[d].to_string(), flips::Sign::kNegative, {}};
        for (const auto& r : by_date[d]) {
            auto& job = r.sign == flips::Sign::kPositive ? pos : neg;
            job.lengths.push_back(static_cast<std::int64_t>(r.length));
            all[r.sign == flips::Sign::kPositive ? 0 : 1].push_back(static_cast<std::int64_t>(r.length));
        }
        jobs.push_back(std::move(pos));
        jobs.push_back(std::move(neg));
    }
    jobs.push_back({"all", flips::Sign::kPositive, std::move(all[0])});
    jobs.push_back({"all", flips::Sign::kNegative, std::move(all[1])});

    tailfit::PowerLawOptions options;
    options.min_samples = c.min_fit_samples;
    std::vector<tailfit::FitOutcome> fits(jobs.size());
    std::vector<std::optional<tailfit::BurstinessResult>> bursts(jobs.size());
    parallel_for(jobs.size(), c.threads, [&](std::size_t i) {
        const auto& lengths = jobs[i].lengths;
        fits[i] = tailfit::fit_power_law(lengths, options);
        std::vector<double> sample;
        const auto* fit = std::get_if<tailfit::PowerLawFit>(&fits[i]);
        for (auto x : lengths)
            if (!c.burstiness_tail_only || (fit && x >= fit->xmin)) sample.push_back(static_cast<double>(x));
        bursts[i] = tailfit::burstiness(sample);
    });

    auto t = ws.table(
        "fits", "alpha dimensionless; xmin and lengths in minutes; B in [-1,1]",
        {"discrete power-law maximum likelihood on lengths >= xmin",
         "xmin minimizes the KS distance over observed values up to the 90th percentile",
         "stderr from the Fisher information of the discrete law",
         c.burstiness_tail_only ? "burstiness uses lengths >= xmin" : "burstiness uses every run length",
         "fits with fewer than min_fit_samples runs are refused",
         kRunDecision},
        {"date", "sign", "status", "alpha", "stderr", "xmin", "ks", "n_tail", "n_total", "B", "mean_tau", "std_tau",
         "reason"});
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::vector<std::string> row{jobs[i].date, flips::sign_name(jobs[i].sign)};
        if (const auto* f = std::get_if<tailfit::PowerLawFit>(&fits[i])) {
            row.insert(row.end(), {"fit", fmt(f->alpha), fmt(f->stderr_alpha), num(f->xmin), fmt(f->ks_distance),
                                   num(f->n_tail), num(f->n_total)});
        } else {
            row.insert(row.end(), {"refused", "NA", "NA", "NA", "NA", "NA", num(jobs[i].lengths.size())});
        }
        if (const auto& b = bursts[i]) row.insert(row.end(), {fmt(b->B), fmt(b->mean_tau), fmt(b->std_tau)});
        else row.insert(row.end(), {"NA", "NA", "NA"});
        const auto* refusal = std::get_if<tailfit::FitRefusal>(&fits[i]);
        row.push_back(refusal ? refusal->reason : "");
        t.add(std::move(row));
    }
    return {ws.write(t)};
}

Artifacts cmd_market(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& mp = ws.market();
    const auto& index = ws.index_returns();
    auto t = ws.table("market_polarity", "polarity dimensionless; index returns as fractions",
                      {"market polarity is the equal-weighted mean over stocks trading in the bar", kMissingDecision},
                      {"date", "bar", "market_polarity", "n_stocks", "index_pct_prev_close", "index_pct_prev_minute",
                       "index_log_return"});
    std::vector<double> x_close, y_close, x_min, y_min;
    for (std::size_t d = 0; d < p.dates().size(); ++d) {
        const Date date = p.dates()[d];
        const auto close = bar_series(index.intraday_pct_prev_close, date);
        const auto minute = bar_series(index.intraday_pct_prev_minute, date);
        const auto logr = bar_series(index.intraday_log, date);
        for (int b = 1; b <= kBarsPerDay; ++b) {
            const auto& cell = mp[d][b - 1];
            t.add({date.to_string(), num(b), fmt(cell.value), num(cell.n_stocks), fmt(close[b - 1]), fmt(minute[b - 1]),
                   fmt(logr[b - 1])});
            if (cell.value && close[b - 1]) {
                x_close.push_back(*cell.value);
                y_close.push_back(*close[b - 1]);
            }
            if (cell.value && minute[b - 1]) {
                x_min.push_back(*cell.value);
                y_min.push_back(*minute[b - 1]);
            }
        }
    }
    Artifacts out{ws.write(t)};
    auto ct = ws.table("market_corr", "Pearson r dimensionless; n in minutes",
                       {"pooled over every minute where both market polarity and the index return exist"},
                       {"return_mode", "r", "n"});
    ct.add({"vs-prev-close", fmt(coupling::market_correlation(x_close, y_close)), num(x_close.size())});
    ct.add({"vs-prev-minute", fmt(coupling::market_correlation(x_min, y_min)), num(x_min.size())});
    out.push_back(ws.write(ct));
    return out;
}

Artifacts cmd_kl(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    ws.returns();
    const auto days = stock_days(p);
    std::vector<std::optional<double>> r(days.size());
    std::vector<const engine::ReturnSeries*> series(p.stocks().size());
    for (std::size_t s = 0; s < p.stocks().size(); ++s) series[s] = ws.stock_returns(p.stocks()[s]);
    parallel_for(days.size(), c.threads, [&](std::size_t i) {
        const auto* rs = series[days[i].stock];
        if (!rs) return;
        const auto lr = bar_series(rs->intraday_log, p.dates()[days[i].date]);
        r[i] = coupling::stock_day_correlation(p.row(days[i].stock, days[i].date), lr, c.min_corr_bars);
    });

    const std::string min_bars = "a stock-day needs " + std::to_string(c.min_corr_bars) + " bars with both polarity and log return";
    auto st = ws.table("stock_day_corr", "Pearson r dimensionless", {min_bars, "returns are same-day one-minute log returns"},
                       {"stock", "date", "r"});
    std::vector<std::vector<double>> coeffs(p.dates().size());
    for (std::size_t i = 0; i < days.size(); ++i) {
        st.add({p.stocks()[days[i].stock], p.dates()[days[i].date].to_string(), fmt(r[i])});
        if (r[i]) coeffs[days[i].date].push_back(*r[i]);
    }
    Artifacts out{ws.write(st)};

    const coupling::BinGrid grid{c.bins, -1.0, 1.0, c.pseudo_count};
    const std::string grid_decision = std::to_string(c.bins) + " equal-width bins on [-1,1] with pseudo-count " +
                                      format_double(c.pseudo_count) + " per bin";
    auto dt = ws.table("corr_dist", "probability per bin", {grid_decision, min_bars},
                       {"date", "bin", "bin_lo", "bin_hi", "probability", "n_stocks"});
    auto kt = ws.table("kl", "nats", {grid_decision, "KL(today || previous trading day with data), natural log"},
                       {"date", "prev_date", "kl"});
    std::optional<coupling::CorrDist> prev;
    const double width = (grid.hi - grid.lo) / static_cast<double>(grid.bins);
    for (std::size_t d = 0; d < p.dates().size(); ++d) {
        if (coeffs[d].empty()) continue;
        auto dist = coupling::build_corr_dist(p.dates()[d], std::move(coeffs[d]), grid);
        for (std::size_t b = 0; b < grid.bins; ++b) {
            const double lo = grid.lo + width * static_cast<double>(b);
            dt.add({dist.trade_date.to_string(), num(b), fmt(lo), fmt(b + 1 == grid.bins ? grid.hi : lo + width),
                    fmt(dist.histogram[b]), num(dist.n_stocks)});
        }
        if (prev) kt.add({dist.trade_date.to_string(), prev->trade_date.to_string(), fmt(coupling::kl_divergence(dist, *prev))});
        prev = std::move(dist);
    }
    out.push_back(ws.write(dt));
    out.push_back(ws.write(kt));
    return out;
}

Artifacts cmd_granger(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    const auto& mp = ws.market();
    const auto& index = ws.index_returns();
    const auto& source = c.granger_return_mode == ReturnMode::kPrevMinute ? index.intraday_pct_prev_minute
                                                                         : index.intraday_pct_prev_close;
    std::vector<coupling::GrangerDayInput> inputs;
    for (std::size_t d = 0; d < p.dates().size(); ++d) {
        coupling::GrangerDayInput in;
        in.date = p.dates()[d];
        const auto ret = bar_series(source, in.date);
        for (int b = 0; b < kBarsPerDay; ++b) {
            in.polarity.push_back(mp[d][b].value);
            in.returns.push_back(ret[b]);
        }
        inputs.push_back(std::move(in));
    }
    coupling::GrangerOptions options;
    options.max_lag = c.max_granger_lag;
    const auto summary = coupling::granger_pass_rates(inputs, options, c.threads);

    const std::vector<std::string> decisions = {
        "one test per day and direction on market polarity and the index return (" +
            std::string(return_mode_name(c.granger_return_mode)) + ")",
        "lag chosen by BIC over 1.." + std::to_string(c.max_granger_lag) + " on a common sample",
        "F test of the cause lags at the 5% level",
        "days with fewer than 60 usable rows or a singular design are skipped"};
    auto t = ws.table("granger", "F statistic and p-value dimensionless; lag in minutes", decisions,
                      {"date", "direction", "status", "lag", "f_stat", "p_value", "df1", "df2", "n_obs", "reject",
                       "skip_reason"});
    for (const auto& day : summary.days) {
        const auto& g = day.test;
        if (g.tested)
            t.add({day.date.to_string(), coupling::direction_name(day.direction), "tested", num(g.lag), fmt(g.f_stat),
                   fmt(g.p_value), num(g.df1), num(g.df2), num(g.n_obs), g.reject ? "1" : "0", ""});
        else
            t.add({day.date.to_string(), coupling::direction_name(day.direction), "skipped", "NA", "NA", "NA", "NA",
                   "NA", num(g.n_obs), "NA", g.skip_reason});
    }
    auto st = ws.table("granger_summary", "pass rate = rejecting days / tested days", decisions,
                       {"direction", "return_mode", "tested", "passed", "skipped", "pass_rate"});
    auto add = [&](coupling::GrangerDirection dir, const coupling::DirectionPassRate& r) {
        st.add({coupling::direction_name(dir), return_mode_name(c.granger_return_mode), num(r.tested), num(r.passed),
                num(r.skipped), fmt(r.rate)});
    };
    add(coupling::GrangerDirection::kPolarityToReturn, summary.polarity_to_return);
    add(coupling::GrangerDirection::kReturnToPolarity, summary.return_to_polarity);
    ws.log() << "pass rates: polarity->return " << fmt(summary.polarity_to_return.rate) << ", return->polarity "
             << fmt(summary.return_to_polarity.rate) << '\n';
    return {ws.write(t), ws.write(st)};
}

Artifacts cmd_impact(Workspace& ws) {
    const auto& p = ws.panel();
    ws.returns();
    const auto periods = ws.periods();
    std::vector<std::vector<coupling::PolarityReturn>> pairs(periods.size());
    for (std::size_t s = 0; s < p.stocks().size(); ++s) {
        const auto* rs = ws.stock_returns(p.stocks()[s]);
        if (!rs) continue;
        for (std::size_t d = 0; d < p.dates().size(); ++d) {
            const auto lr = bar_series(rs->intraday_log, p.dates()[d]);
            for (int b = 1; b <= kBarsPerDay; ++b) {
                const auto pol = p.polarity(s, d, b);
                if (!pol || !lr[b - 1]) continue;
                for (std::size_t k = 0; k < periods.size(); ++k)
                    if (periods[k].contains(p.dates()[d])) pairs[k].push_back({*pol, *lr[b - 1]});
            }
        }
    }
    auto t = ws.table("impact", "one-minute log returns",
                      {"returns grouped by the sign of the same minute's polarity",
                       "quantiles interpolate linearly; fences at 1.5 IQR; whiskers are the extreme points inside"},
                      {"period", "group", "n", "q1", "median", "q3", "lower_fence", "upper_fence", "lower_whisker",
                       "upper_whisker", "n_outliers"});
    for (std::size_t k = 0; k < periods.size(); ++k) {
        const auto impact = coupling::price_impact_groups(pairs[k]);
        const std::pair<const char*, const std::optional<coupling::FiveNumberSummary>*> groups[] = {
            {"negative", &impact.negative}, {"zero", &impact.zero}, {"positive", &impact.positive}};
        for (const auto& [name, summary] : groups) {
            if (!*summary) continue;
            const auto& s = **summary;
            t.add({periods[k].label, name, num(s.n), fmt(s.q1), fmt(s.median), fmt(s.q3), fmt(s.lower_fence),
                   fmt(s.upper_fence), fmt(s.lower_whisker), fmt(s.upper_whisker), num(s.n_outliers)});
        }
    }
    return {ws.write(t)};
}

Artifacts cmd_emotion(Workspace& ws) {
    const auto& p = ws.panel();
    const auto& c = ws.config();
    if (c.emotion.empty()) throw Error(ErrorCategory::kConfig, "emotion needs an emotion series path");
    const auto rjf = coupling::read_emotion_series(c.emotion);
    const auto& mp = ws.market();
    const auto& index = ws.index_returns();
    std::map<Date, double> daily;
    std::map<Date, engine::IndexMinimum> minima;
    for (std::size_t d = 0; d < p.dates().size(); ++d) {
        const Date date = p.dates()[d];
        const auto idx = bar_series(index.intraday_pct_prev_close, date);
        if (std::none_of(idx.begin(), idx.end(), [](const auto& v) { return v.has_value(); })) continue;
        Series pol;
        for (int b = 0; b < kBarsPerDay; ++b) pol[b] = mp[d][b].value;
        const auto m = engine::polarity_at_index_minimum(pol, idx);
        minima[date] = m;
        if (m.polarity) daily[date] = *m.polarity;
    }
    const auto points = coupling::join_emotion(daily, rjf);
    const auto corr = coupling::emotion_correlation(points, c.periods);
    const std::vector<std::string> decisions = {
        "daily polarity is market polarity at the bar of the index's lowest return vs previous close (earliest on ties)",
        "correlations need at least 3 joined days"};
    auto pt = ws.table("emotion_points", "polarity dimensionless; rjf as supplied; index_return as a fraction", decisions,
                       {"date", "period", "index_min_bar", "index_return", "polarity", "rjf"});
    for (const auto& pt_ : points) {
        const auto& m = minima.at(pt_.date);
        pt.add({pt_.date.to_string(), c.periods.label(pt_.date), num(m.bar), fmt(m.index_return), fmt(pt_.polarity),
                fmt(pt_.rjf)});
    }
    auto ct = ws.table("emotion_corr", "Pearson r dimensionless; n in days", decisions, {"period", "r", "n"});
    ct.add({corr.overall.period, fmt(corr.overall.r), num(corr.overall.n)});
    for (const auto& pc : corr.periods) ct.add({pc.period, fmt(pc.r), num(pc.n)});
    return {ws.write(pt), ws.write(ct)};
}

Artifacts cmd_synth(Workspace& ws) {
    const auto& c = ws.config();
    if (c.synth_spec.empty()) throw Error(ErrorCategory::kConfig, "synth needs a synth_spec path");
    auto spec = synth::load_scenario_spec(c.synth_spec);
    if (c.seed) spec.seed = *c.seed;
    const auto scenario = synth::generate(spec);
    synth::write_scenario(scenario, c.out);
    ws.log() << "synthetic feed: " << scenario.transactions.size() << " transactions, " << scenario.stock_ids.size()
             << " stocks x " << scenario.dates.size() << " days (seed " << spec.seed << ")\n";
    Artifacts out;
    for (const char* f : {"transactions.csv", "eod.csv", "intraday.csv", "ground_truth.csv", "index_min_bar.csv"})
        out.push_back(c.out / f);
    return out;
}

Artifacts cmd_verify(Workspace& ws) {
    const auto& c = ws.config();
    const auto results = run_verify_suite(c.verify_scenarios, c.seed.value_or(1), c.threads);
    auto t = ws.table("verify", "pass/fail", {"oracle checks on synthetic data and closed-form cases"},
                      {"check", "status", "detail"});
    std::size_t failed = 0;
    for (const auto& r : results) {
        ws.log() << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
        t.add({r.name, r.pass ? "pass" : "fail", r.detail});
        failed += r.pass ? 0 : 1;
    }
    auto path = ws.write(t);
    if (failed) throw Error(ErrorCategory::kNumeric, std::to_string(failed) + " verify checks failed");
    return {path};
}

const std::map<std::string, std::function<Artifacts(Workspace&)>>& registry() {
    static const std::map<std::string, std::function<Artifacts(Workspace&)>> r = {
        {"ingest", cmd_ingest},     {"polarity", cmd_polarity}, {"ratios", cmd_ratios},
        {"flips", cmd_flips},       {"runlengths", cmd_runlengths}, {"fit", cmd_fit},
        {"market", cmd_market},     {"kl", cmd_kl},             {"granger", cmd_granger},
        {"impact", cmd_impact},     {"emotion", cmd_emotion},   {"synth", cmd_synth},
        {"verify", cmd_verify},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"ingest", "polarity", "ratios", "flips",  "runlengths",
                                                   "fit",    "market",   "kl",     "granger", "impact",
                                                   "emotion", "synth",   "verify"};
    return names;
}

std::vector<std::filesystem::path> run_command(const std::string& command, const RunConfig& config,
                                               std::ostream& log) {
    const auto it = registry().find(command);
    if (it == registry().end()) throw Error(ErrorCategory::kConfig, "unknown command '" + command + "'");
    config.validate_paths();
    Workspace ws(config, log);
    try {
        return it->second(ws);
    } catch (const std::filesystem::filesystem_error& e) {
        throw Error(ErrorCategory::kIo, e.what());
    }
}

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::kConfig: return 2;
        case ErrorCategory::kIo: return 3;
        case ErrorCategory::kData: return 4;
        case ErrorCategory::kNumeric: return 5;
    }
    return 1;
}

}  // namespace polarity::report
