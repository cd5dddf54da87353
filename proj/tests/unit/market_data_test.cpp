#include <vector>

#include <gtest/gtest.h>

#include "polarity/common/error.hpp"
#include "polarity/market_data/binary_cache.hpp"
#include "polarity/market_data/price_files.hpp"
#include "polarity/market_data/trading_grid.hpp"
#include "polarity/market_data/transaction_reader.hpp"
#include "test_util.hpp"

using namespace polarity;
using namespace polarity::market;
using polarity::testing::TempDir;
using polarity::testing::trade;
using polarity::testing::write_file;

TEST(TradingGrid, SessionEdges) {
    EXPECT_FALSE(assign_bar(TimeOfDay::hms(9, 29, 59, 999)));
    EXPECT_EQ(assign_bar(TimeOfDay::hms(9, 30, 0)), 1);
    EXPECT_EQ(assign_bar(TimeOfDay::hms(9, 30, 59, 999)), 1);
    EXPECT_EQ(assign_bar(TimeOfDay::hms(9, 31, 0)), 2);
    EXPECT_EQ(assign_bar(TimeOfDay::hms(11, 29, 59, 999)), 120);
    EXPECT_FALSE(assign_bar(TimeOfDay::hms(11, 30, 0)));
    EXPECT_FALSE(assign_bar(TimeOfDay::hms(12, 59, 59, 999)));
    EXPECT_EQ(assign_bar(TimeOfDay::hms(13, 0, 0)), 121);
    EXPECT_EQ(assign_bar(TimeOfDay::hms(14, 56, 59, 999)), 237);
    EXPECT_FALSE(assign_bar(TimeOfDay::hms(14, 57, 0)));
    EXPECT_FALSE(assign_bar(TimeOfDay::hms(15, 0, 0)));
}

TEST(TradingGrid, MonotoneOverTheDay) {
    int last = 0;
    for (int ms = 0; ms < 24 * 3600 * 1000; ms += 250) {
        auto b = assign_bar(TimeOfDay(ms));
        if (!b) continue;
        EXPECT_GE(*b, last);
        EXPECT_LE(*b, last + 1);
        last = *b;
    }
    EXPECT_EQ(last, kBarsPerDay);
}

TEST(TradingGrid, BarStartRoundTrip) {
    for (int b = 1; b <= kBarsPerDay; ++b) {
        EXPECT_EQ(assign_bar(bar_start(b)), b);
        EXPECT_EQ(assign_bar(TimeOfDay(bar_start(b).millis() + 59'999)), b);
    }
}

TEST(Schema, FromNames) {
    auto s = Schema::from_names({"stock_id", "_", "trade_date", "time", "price", "volume", "sell_serial", "buy_serial"}, ';');
    ASSERT_EQ(s.columns.size(), 8u);
    EXPECT_EQ(s.columns[1], Field::kIgnore);
    EXPECT_EQ(s.columns[6], Field::kSellSerial);
    EXPECT_EQ(s.delimiter, ';');
    EXPECT_THROW(Schema::from_names({"stock_id", "trade_date"}), Error);
    EXPECT_THROW(Schema::from_names({"stock_id", "stock_id", "trade_date", "time", "price", "volume", "buy_serial",
                                     "sell_serial"}),
                 Error);
    EXPECT_THROW(Schema::from_names({"bogus", "trade_date", "time", "price", "volume", "buy_serial", "sell_serial"}),
                 Error);
}

TEST(TransactionRow, ParsesStandardRow) {
    TransactionRecord r;
    std::string why;
    ASSERT_TRUE(parse_transaction_row("2015-06-01,000001,09:30:05.120,10.5,300,17,42", Schema::standard(), r, why)) << why;
    EXPECT_EQ(r.trade_date, Date(20150601));
    EXPECT_EQ(r.stock_id, "000001");
    EXPECT_EQ(r.timestamp, TimeOfDay::hms(9, 30, 5, 120));
    EXPECT_EQ(r.volume, 300);
    EXPECT_EQ(r.buy_serial, 17u);
    EXPECT_EQ(r.sell_serial, 42u);
    EXPECT_EQ(r.bar, 1);
}

TEST(TransactionRow, RejectsBadFields) {
    TransactionRecord r;
    std::string why;
    const auto& s = Schema::standard();
    EXPECT_FALSE(parse_transaction_row("2015-06-01,000001,09:30:05,10.5,300,17", s, r, why));
    EXPECT_FALSE(parse_transaction_row("2015-06-31,000001,09:30:05,10.5,300,17,42", s, r, why));
    EXPECT_FALSE(parse_transaction_row("2015-06-01,000001,09:30:05,-1,300,17,42", s, r, why));
    EXPECT_FALSE(parse_transaction_row("2015-06-01,000001,09:30:05,10.5,0,17,42", s, r, why));
    EXPECT_FALSE(parse_transaction_row("2015-06-01,000001,09:30:05,10.5,300,x,42", s, r, why));
    EXPECT_FALSE(parse_transaction_row("2015-06-01,,09:30:05,10.5,300,17,42", s, r, why));
}

TEST(TransactionRow, OffGridKeepsRecord) {
    TransactionRecord r;
    std::string why;
    ASSERT_TRUE(parse_transaction_row("2015-06-01,000001,09:25:00,10.5,300,17,42", Schema::standard(), r, why));
    EXPECT_TRUE(r.off_grid());
    ASSERT_TRUE(parse_transaction_row("2015-06-01,000001,11:30:00,10.5,300,17,42", Schema::standard(), r, why));
    EXPECT_TRUE(r.off_grid());
}

TEST(TransactionReader, WriteReadRoundTrip) {
    TempDir dir;
    const Date d(20150601);
    std::vector<TransactionRecord> rows = {trade("000001", d, TimeOfDay::hms(9, 30, 1), 1, 2, 10.25, 100),
                                           trade("000002", d, TimeOfDay::hms(9, 25, 0), 3, 4, 7.5, 200),
                                           trade("000001", d, TimeOfDay::hms(14, 56, 30, 500), 5, 6, 10.5, 300)};
    write_transactions(dir / "t.csv", rows);
    std::vector<TransactionRecord> back;
    auto summary = for_each_transaction(dir / "t.csv", Schema::standard(), [&](const TransactionRecord& r) { back.push_back(r); });
    EXPECT_EQ(back, rows);
    EXPECT_EQ(summary.parsed, 3u);
    EXPECT_EQ(summary.off_grid, 1u);
    EXPECT_EQ(summary.malformed, 0u);
}

TEST(TransactionReader, HeaderMismatchIsDataError) {
    TempDir dir;
    write_file(dir / "t.csv", "date,stock,time,price,volume,buy,sell\n");
    try {
        TransactionReader r(dir / "t.csv", Schema::standard());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::kData);
    }
}

TEST(TransactionReader, MissingFileIsIoError) {
    try {
        TransactionReader r("/nonexistent/t.csv", Schema::standard());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::kIo);
    }
}

TEST(TransactionReader, MalformedThreshold) {
    TempDir dir;
    std::string text = "trade_date,stock_id,time,price,volume,buy_serial,sell_serial\n";
    for (int i = 0; i < 99; ++i) text += "2015-06-01,000001,09:30:00,10,100," + std::to_string(i + 1) + ",1\n";
    text += "garbage row\n";
    write_file(dir / "t.csv", text);
    std::size_t n = 0;
    ReaderOptions strict;
    strict.malformed_threshold = 0.001;
    EXPECT_THROW(for_each_transaction(dir / "t.csv", Schema::standard(), [&](const TransactionRecord&) { ++n; }, strict),
                 Error);
    ReaderOptions lenient;
    lenient.malformed_threshold = 0.02;
    auto s = for_each_transaction(dir / "t.csv", Schema::standard(), [](const TransactionRecord&) {}, lenient);
    EXPECT_EQ(s.malformed, 1u);
    EXPECT_EQ(s.parsed, 99u);
    ASSERT_EQ(s.samples.size(), 1u);
    EXPECT_EQ(s.samples[0].line, 101u);
}

TEST(TransactionReader, CustomSchemaWithoutHeader) {
    TempDir dir;
    write_file(dir / "t.txt", "000001|x|20150601|13:00:00|9.9|50|8|7\r\n");
    auto schema = Schema::from_names({"stock_id", "_", "trade_date", "time", "price", "volume", "buy_serial", "sell_serial"},
                                     '|', false);
    std::vector<TransactionRecord> rows;
    for_each_transaction(dir / "t.txt", schema, [&](const TransactionRecord& r) { rows.push_back(r); });
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].bar, 121);
    EXPECT_EQ(rows[0].buy_serial, 8u);
}

TEST(PriceFiles, EodRoundTripAndErrors) {
    TempDir dir;
    std::vector<EodPrice> rows = {{Date(20150601), "000001", 10.5}, {Date(20150602), "000001", 11.0}};
    write_eod_prices(dir / "eod.csv", rows);
    EXPECT_EQ(read_eod_prices(dir / "eod.csv"), rows);

    write_file(dir / "neg.csv", "date,id,close\n2015-06-01,000001,0\n");
    EXPECT_THROW(read_eod_prices(dir / "neg.csv"), Error);
    write_file(dir / "dup.csv", "date,id,close\n2015-06-01,000001,1\n2015-06-01,000001,2\n");
    EXPECT_THROW(read_eod_prices(dir / "dup.csv"), Error);
    EXPECT_THROW(read_eod_prices(dir / "missing.csv"), Error);
}

TEST(PriceFiles, IntradayBarsTimesAndMissing) {
    TempDir dir;
    write_file(dir / "i.csv",
               "date,id,bar,last_price\n"
               "2015-06-01,000001,1,10\n"
               "2015-06-01,000001,13:00,10.2\n"
               "2015-06-01,000001,11:30:00,10.1\n"
               "2015-06-01,000001,5,NA\n"
               "2015-06-01,000001,6,\n");
    auto rows = read_intraday_prices(dir / "i.csv");
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].bar, 1);
    EXPECT_EQ(rows[1].bar, 121);
    EXPECT_FALSE(rows[2].last_price);
    EXPECT_FALSE(rows[3].last_price);

    write_intraday_prices(dir / "j.csv", rows);
    EXPECT_EQ(read_intraday_prices(dir / "j.csv"), rows);

    write_file(dir / "bad.csv", "date,id,bar,last_price\n2015-06-01,000001,238,10\n");
    EXPECT_THROW(read_intraday_prices(dir / "bad.csv"), Error);
}

TEST(BinaryCache, RoundTripPreservesRecords) {
    TempDir dir;
    std::vector<TransactionRecord> rows;
    for (int i = 0; i < 500; ++i) {
        const Date d(i % 2 ? 20150601 : 20150602);
        rows.push_back(trade(i % 3 ? "000001" : "600000", d, TimeOfDay::hms(9, 25 + i % 40, i % 60, i), i + 1, 1000 - i,
                             10.0 + i * 0.01, 100 + i));
    }
    {
        CacheWriter w(dir / "c.plab", 64);  // forces blocks to split
        for (const auto& r : rows) w.add(r);
        w.close();
        EXPECT_EQ(w.records_written(), rows.size());
    }
    CacheReader reader(dir / "c.plab");
    CacheBlock block;
    std::vector<TransactionRecord> back;
    while (reader.next(block))
        for (std::size_t i = 0; i < block.size(); ++i) back.push_back(block.record(i));
    EXPECT_EQ(reader.records_read(), rows.size());
    auto key = [](const TransactionRecord& r) { return std::tie(r.trade_date, r.stock_id, r.buy_serial); };
    auto by_key = [&](const TransactionRecord& a, const TransactionRecord& b) { return key(a) < key(b); };
    std::sort(rows.begin(), rows.end(), by_key);
    std::sort(back.begin(), back.end(), by_key);
    EXPECT_EQ(back, rows);
}

TEST(BinaryCache, RejectsBadMagicAndTruncation) {
    TempDir dir;
    write_file(dir / "bad.plab", "NOTACACHEFILE");
    EXPECT_THROW(CacheReader(dir / "bad.plab"), Error);

    {
        CacheWriter w(dir / "c.plab");
        w.add(trade("000001", Date(20150601), TimeOfDay::hms(9, 31, 0), 1, 2));
        w.close();
    }
    const auto size = std::filesystem::file_size(dir / "c.plab");
    std::filesystem::resize_file(dir / "c.plab", size - 4);
    CacheReader reader(dir / "c.plab");
    CacheBlock block;
    EXPECT_THROW(
        {
            while (reader.next(block)) {
            }
        },
        Error);
}

TEST(BinaryCache, BuildFromTransactionFile) {
    TempDir dir;
    write_transactions(dir / "t.csv", {trade("000001", Date(20150601), TimeOfDay::hms(9, 31, 0), 1, 2),
                                       trade("000001", Date(20150601), TimeOfDay::hms(9, 20, 0), 3, 4)});
    auto summary = build_cache(dir / "t.csv", Schema::standard(), dir / "c.plab");
    EXPECT_EQ(summary.parsed, 2u);
    EXPECT_EQ(summary.off_grid, 1u);
    CacheReader reader(dir / "c.plab");
    CacheBlock block;
    std::size_t n = 0;
    while (reader.next(block)) n += block.size();
    EXPECT_EQ(n, 2u);
}
