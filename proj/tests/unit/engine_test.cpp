#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "polarity/common/error.hpp"
#include "polarity/engine/direction_ratios.hpp"
#include "polarity/engine/market_polarity.hpp"
#include "polarity/engine/panel.hpp"
#include "polarity/engine/polarity.hpp"
#include "polarity/engine/returns.hpp"
#include "test_util.hpp"

using namespace polarity;
using engine::CountMode;
using engine::ManTimes;
using engine::PanelBuilder;
using engine::PolarityPanel;
using engine::compute_returns;
using engine::count_distinct;
using engine::count_mantimes;
using engine::direction_ratios;
using engine::classify_limit;
using engine::LimitStatus;
using engine::market_polarity;
using engine::market_polarity_day;
using engine::moments;
using engine::polarity_at_index_minimum;
using polarity::testing::trade;
using polarity::testing::trade_in_bar;

TEST(Polarity, Examples) {
    EXPECT_EQ(engine::polarity(3, 1), 0.5);
    EXPECT_EQ(engine::polarity(1, 3), -0.5);
    EXPECT_EQ(engine::polarity(5, 5), 0.0);
    EXPECT_EQ(engine::polarity(4, 0), 1.0);
    EXPECT_FALSE(engine::polarity(0, 0));
}

TEST(Polarity, AntisymmetryAndScaleInvariance) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::uint32_t> n(0, 500);
    for (int i = 0; i < 2000; ++i) {
        const auto b = n(rng), s = n(rng);
        if (b + s == 0) continue;
        EXPECT_EQ(*engine::polarity(b, s), -*engine::polarity(s, b));
        const std::uint32_t k = 1 + i % 7;
        EXPECT_NEAR(*engine::polarity(k * b, k * s), *engine::polarity(b, s), 1e-15);
        EXPECT_GE(*engine::polarity(b, s), -1.0);
        EXPECT_LE(*engine::polarity(b, s), 1.0);
    }
}

TEST(ManTimes, CountsDistinctSerialsPerSide) {
    const Date d(20150601);
    // One buy order filled three times against three sellers.
    std::vector<market::TransactionRecord> batch = {trade_in_bar("A", d, 1, 7, 1), trade_in_bar("A", d, 1, 7, 2),
                                                    trade_in_bar("A", d, 1, 7, 3)};
    const auto m = count_mantimes(batch);
    EXPECT_EQ(m.buy, 1u);
    EXPECT_EQ(m.sell, 3u);
    EXPECT_EQ(*engine::polarity(m), -0.5);
    std::vector<std::uint64_t> serials = {5, 1, 5, 2, 1};
    EXPECT_EQ(count_distinct(serials), 3u);
}

TEST(PanelBuilder, CountsPerBarAndDropsOffGrid) {
    const Date d(20150601);
    PanelBuilder b;
    b.add(trade_in_bar("B", d, 1, 1, 10));
    b.add(trade_in_bar("B", d, 1, 2, 10, 30));
    b.add(trade_in_bar("B", d, 2, 2, 11));
    b.add(trade("B", d, TimeOfDay::hms(9, 25, 0), 3, 12));
    b.add(trade("C", d, TimeOfDay::hms(9, 25, 0), 4, 13));  // off-grid only: never enters the axes
    const auto p = b.build();
    ASSERT_EQ(p.stocks(), std::vector<std::string>{"B"});
    EXPECT_EQ(b.off_grid_records(), 2u);
    EXPECT_EQ(b.on_grid_records(), 3u);
    EXPECT_EQ(p.counts(0, 0, 1), (ManTimes{2, 1}));
    EXPECT_EQ(p.counts(0, 0, 2), (ManTimes{1, 1}));
    EXPECT_FALSE(p.polarity(0, 0, 3));
    EXPECT_EQ(p.non_empty_cells(), 2u);
}

TEST(PanelBuilder, PerDayModeCreditsFirstBar) {
    const Date d(20150601);
    PanelBuilder per_day(CountMode::kPerDay);
    per_day.add(trade_in_bar("A", d, 1, 1, 10));
    per_day.add(trade_in_bar("A", d, 2, 1, 11));  // buyer 1 again, later bar
    per_day.add(trade_in_bar("A", d, 2, 2, 10));  // seller 10 again
    const auto p = per_day.build();
    EXPECT_EQ(p.counts(0, 0, 1), (ManTimes{1, 1}));
    EXPECT_EQ(p.counts(0, 0, 2), (ManTimes{1, 1}));
}

// Independent recount with ordered sets, used as an oracle for the builder.
std::map<std::tuple<std::string, Date, int>, ManTimes> oracle_counts(const std::vector<market::TransactionRecord>& rows) {
    std::map<std::tuple<std::string, Date, int>, std::pair<std::set<std::uint64_t>, std::set<std::uint64_t>>> sets;
    for (const auto& r : rows) {
        if (!r.bar) continue;
        auto& s = sets[{r.stock_id, r.trade_date, *r.bar}];
        s.first.insert(r.buy_serial);
        s.second.insert(r.sell_serial);
    }
    std::map<std::tuple<std::string, Date, int>, ManTimes> out;
    for (const auto& [k, v] : sets)
        out[k] = ManTimes{static_cast<std::uint32_t>(v.first.size()), static_cast<std::uint32_t>(v.second.size())};
    return out;
}

TEST(PanelBuilder, MatchesSetOracleAndIgnoresOrder) {
    std::mt19937_64 rng(11);
    std::vector<market::TransactionRecord> rows;
    std::uniform_int_distribution<int> ms(9 * 3600 * 1000, 15 * 3600 * 1000), stock(0, 6), day(0, 2);
    std::uniform_int_distribution<std::uint64_t> serial(1, 40);
    for (int i = 0; i < 20000; ++i)
        rows.push_back(trade("S" + std::to_string(stock(rng)), Date(20150601 + day(rng)), TimeOfDay(ms(rng)), serial(rng),
                             serial(rng)));
    PanelBuilder a;
    for (const auto& r : rows) a.add(r);
    const auto panel = a.build(3);
    const auto oracle = oracle_counts(rows);
    std::size_t checked = 0;
    for (std::size_t s = 0; s < panel.stocks().size(); ++s)
        for (std::size_t d = 0; d < panel.dates().size(); ++d)
            for (int b = 1; b <= market::kBarsPerDay; ++b) {
                auto it = oracle.find({panel.stocks()[s], panel.dates()[d], b});
                const ManTimes expected = it == oracle.end() ? ManTimes{} : it->second;
                EXPECT_EQ(panel.counts(s, d, b), expected);
                checked += it != oracle.end();
            }
    EXPECT_EQ(checked, oracle.size());

    std::shuffle(rows.begin(), rows.end(), rng);
    PanelBuilder b;
    for (const auto& r : rows) b.add(r);
    EXPECT_EQ(b.build(1), panel);
}

TEST(PolarityPanel, FromCountsRejectsDuplicatesAndBadBars) {
    using Cell = PolarityPanel::CellCount;
    const Date d(20150601);
    EXPECT_THROW(PolarityPanel::from_counts({Cell{"A", d, 1, {1, 1}}, Cell{"A", d, 1, {2, 1}}}), Error);
    EXPECT_THROW(PolarityPanel::from_counts({Cell{"A", d, 0, {1, 1}}}), Error);
    EXPECT_THROW(PolarityPanel::from_counts({Cell{"A", d, 238, {1, 1}}}), Error);
    const auto p = PolarityPanel::from_counts({Cell{"B", d, 5, {2, 1}}, Cell{"A", Date(20150602), 7, {0, 3}}});
    EXPECT_EQ(p.stocks(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(p.dates(), (std::vector<Date>{d, Date(20150602)}));
    EXPECT_EQ(p.polarity(0, 1, 7), -1.0);
    EXPECT_EQ(p.row(1, 0)[4], 1.0 / 3.0);
}

TEST(DirectionRatios, SharesOfNonMissing) {
    std::vector<std::optional<double>> v = {0.5, -0.2, 0.0, std::nullopt, 0.1, std::nullopt};
    auto r = direction_ratios(v);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->n, 4u);
    EXPECT_DOUBLE_EQ(r->pos_ratio, 0.5);
    EXPECT_DOUBLE_EQ(r->neg_ratio, 0.25);
    EXPECT_DOUBLE_EQ(r->zero_ratio, 0.25);
    EXPECT_FALSE(direction_ratios(std::vector<std::optional<double>>{std::nullopt}));
}

TEST(DirectionRatios, SignFlipSwapsRatios) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> k(-3, 3);
    std::vector<std::optional<double>> v, neg;
    for (int i = 0; i < 500; ++i) {
        const double x = k(rng) / 3.0;
        v.push_back(x);
        neg.push_back(-x);
    }
    auto a = direction_ratios(v), b = direction_ratios(neg);
    EXPECT_EQ(a->pos_ratio, b->neg_ratio);
    EXPECT_EQ(a->neg_ratio, b->pos_ratio);
    EXPECT_EQ(a->zero_ratio, b->zero_ratio);
    EXPECT_NEAR(a->pos_ratio + a->neg_ratio + a->zero_ratio, 1.0, 1e-12);
}

TEST(Moments, MatchesDirectFormulas) {
    const std::vector<double> x = {-1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.0};
    const double n = 7.0;
    double mean = 0.0;
    for (double v : x) mean += v / n;
    double s2 = 0.0, m4 = 0.0;
    for (double v : x) {
        s2 += (v - mean) * (v - mean);
        m4 += std::pow(v - mean, 4);
    }
    const double pop_var = s2 / n;
    const auto m = moments(x);
    EXPECT_EQ(m.n, 7u);
    EXPECT_NEAR(m.mean, mean, 1e-15);
    EXPECT_NEAR(m.std, std::sqrt(s2 / (n - 1)), 1e-15);
    EXPECT_NEAR(m.excess_kurtosis, (m4 / n) / (pop_var * pop_var) - 3.0, 1e-12);
}

TEST(Moments, UniformIsPlatykurtic) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(200000);
    for (auto& v : x) v = u(rng);
    const auto m = moments(x);
    EXPECT_NEAR(m.excess_kurtosis, -1.2, 0.02);
    EXPECT_NEAR(m.std, std::sqrt(1.0 / 3.0), 0.005);
}

TEST(MarketPolarity, MeanOverAvailableStocks) {
    using Cell = PolarityPanel::CellCount;
    const Date d(20150601);
    const auto p = PolarityPanel::from_counts(
        {Cell{"A", d, 1, {3, 1}}, Cell{"B", d, 1, {1, 1}}, Cell{"C", d, 2, {0, 2}}, Cell{"A", d, 2, {2, 0}}});
    const auto c1 = market_polarity(p, 0, 1);
    EXPECT_EQ(c1.n_stocks, 2u);
    EXPECT_DOUBLE_EQ(*c1.value, 0.25);
    const auto c2 = market_polarity(p, 0, 2);
    EXPECT_EQ(c2.n_stocks, 2u);
    EXPECT_DOUBLE_EQ(*c2.value, 0.0);
    const auto c3 = market_polarity(p, 0, 3);
    EXPECT_EQ(c3.n_stocks, 0u);
    EXPECT_FALSE(c3.value);
    const auto day = market_polarity_day(p, 0);
    EXPECT_EQ(day[0].value, c1.value);
}

TEST(IndexMinimum, EarliestBarWinsTies) {
    market::BarArray<std::optional<double>> mp{}, idx{};
    mp[4] = 0.3;
    mp[9] = -0.1;
    idx[2] = 0.01;
    idx[4] = -0.02;
    idx[9] = -0.02;
    const auto m = polarity_at_index_minimum(mp, idx);
    EXPECT_EQ(m.bar, 5);
    EXPECT_EQ(m.polarity, 0.3);
    EXPECT_EQ(m.index_return, -0.02);
    EXPECT_THROW(polarity_at_index_minimum(mp, market::BarArray<std::optional<double>>{}), Error);
}

TEST(Returns, IntradayAndDaily) {
    const Date d1(20150601), d2(20150602);
    std::vector<market::EodPrice> eod = {{d1, "A", 10.0}, {d2, "A", 11.0}};
    std::vector<market::IntradayPrice> intra = {{d2, "A", 1, 10.5}, {d2, "A", 2, 10.0}, {d2, "A", 4, 11.0}};
    const auto r = compute_returns(eod, intra).at("A");
    ASSERT_EQ(r.daily.size(), 1u);
    EXPECT_DOUBLE_EQ(r.daily[0].pct, 0.1);
    EXPECT_EQ(r.daily[0].limit, LimitStatus::kAtLimit);
    EXPECT_EQ(r.daily_pct(d2), r.daily[0].pct);
    EXPECT_FALSE(r.daily_pct(d1));

    const auto& lr = r.intraday_log.at(d2);
    EXPECT_FALSE(lr[0]);
    EXPECT_NEAR(*lr[1], std::log(10.0 / 10.5), 1e-15);
    EXPECT_FALSE(lr[3]);  // bar 3 missing, so bar 4 has no previous minute
    EXPECT_DOUBLE_EQ(*r.intraday_pct_prev_close.at(d2)[0], 0.05);
    EXPECT_DOUBLE_EQ(*r.intraday_pct_prev_minute.at(d2)[1], (10.0 - 10.5) / 10.5);
}

TEST(Returns, LimitClassification) {
    EXPECT_EQ(classify_limit(0.05), LimitStatus::kWithin);
    EXPECT_EQ(classify_limit(0.0995), LimitStatus::kAtLimit);
    EXPECT_EQ(classify_limit(-0.1004), LimitStatus::kAtLimit);
    EXPECT_EQ(classify_limit(0.12), LimitStatus::kBeyondLimit);
    std::vector<market::EodPrice> bad = {{Date(20150601), "A", -1.0}};
    EXPECT_THROW(compute_returns(bad, {}), Error);
}
