#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "polarity/common/error.hpp"
#include "polarity/report/commands.hpp"
#include "polarity/report/run_config.hpp"
#include "polarity/report/table.hpp"
#include "test_util.hpp"

using namespace polarity;
using namespace polarity::report;
using polarity::testing::TempDir;
using polarity::testing::write_file;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_hash(std::string text) {
    const auto at = text.find("# config_hash: ");
    if (at != std::string::npos) text.erase(at, text.find('\n', at) - at);
    return text;
}

ErrorCategory category_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    ADD_FAILURE() << "no polarity::Error thrown";
    return ErrorCategory::kNumeric;
}

}  // namespace

TEST(RunConfig, DefaultsAndParsing) {
    const auto c = RunConfig::from_json(nlohmann::json::parse(R"({"bins": 20, "pre_crash_end": "2015-06-10",
        "count_mode": "per-day", "burstiness_mode": "tail", "granger_return_mode": "vs-prev-close",
        "schema": {"delimiter": "|", "has_header": false,
                   "columns": ["stock_id", "trade_date", "time", "price", "volume", "buy_serial", "sell_serial"]}})"));
    EXPECT_EQ(c.bins, 20u);
    EXPECT_EQ(c.pseudo_count, 0.5);
    EXPECT_EQ(c.periods.pre_crash_end, Date(20150610));
    EXPECT_EQ(c.count_mode, engine::CountMode::kPerDay);
    EXPECT_TRUE(c.burstiness_tail_only);
    EXPECT_EQ(c.granger_return_mode, ReturnMode::kPrevClose);
    EXPECT_EQ(c.schema.delimiter, '|');
    EXPECT_FALSE(c.schema.has_header);
    EXPECT_EQ(c.schema.columns[0], market::Field::kStockId);
}

TEST(RunConfig, RejectsBadValues) {
    for (const char* text : {R"({"bogus": 1})", R"({"bins": 1})", R"({"pseudo_count": 0})", R"({"max_granger_lag": 0})",
                             R"({"threads": 0})", R"({"count_mode": "hourly"})", R"({"pre_crash_end": "June"})",
                             R"({"bins": "forty"})", R"({"crash_end": "2015-01-01"})", "[1, 2]"}) {
        EXPECT_EQ(category_of([&] { RunConfig::from_json(nlohmann::json::parse(text)); }), ErrorCategory::kConfig)
            << text;
    }
}

TEST(RunConfig, MissingInputPathIsConfigError) {
    RunConfig c;
    c.eod_prices = "/nonexistent/eod.csv";
    EXPECT_EQ(category_of([&] { c.validate_paths(); }), ErrorCategory::kConfig);
    EXPECT_EQ(category_of([] { RunConfig::load("/nonexistent/config.json"); }), ErrorCategory::kConfig);
}

TEST(RunConfig, HashTracksContentNotThreadsOrOut) {
    RunConfig a;
    RunConfig b = a;
    b.threads = 8;
    b.out = "elsewhere";
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    b.bins = 41;
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(RunConfig::from_json(a.to_json()).hash(), a.hash());
}

TEST(RunConfig, Overrides) {
    nlohmann::json j = nlohmann::json::object();
    apply_override(j, "bins", "30");
    apply_override(j, "pseudo_count", "0.25");
    apply_override(j, "index_id", "000300");
    apply_override(j, "seed", "42");
    const auto c = RunConfig::from_json(j);
    EXPECT_EQ(c.bins, 30u);
    EXPECT_EQ(c.pseudo_count, 0.25);
    EXPECT_EQ(c.index_id, "000300");
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(category_of([&] { apply_override(j, "bins", "x"); }), ErrorCategory::kConfig);
    EXPECT_EQ(category_of([&] { apply_override(j, "nope", "1"); }), ErrorCategory::kConfig);
    EXPECT_EQ(category_of([&] { apply_override(j, "schema", "1"); }), ErrorCategory::kConfig);
}

TEST(Table, WriteReadAndWidthCheck) {
    TempDir dir;
    Table t;
    t.name = "demo";
    t.config_hash = "abc";
    t.units = "none";
    t.decisions = {"first", "second"};
    t.columns = {"a", "b"};
    t.add({"1", "x"});
    t.add({"2", ""});
    write_table(dir / "demo.csv", t);
    EXPECT_EQ(slurp(dir / "demo.csv"),
              "# artifact: demo\n# config_hash: abc\n# units: none\n# decision: first\n# decision: second\na,b\n1,x\n2,\n");
    const auto rows = read_table(dir / "demo.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2], (std::vector<std::string>{"2", ""}));
    t.add({"only one"});
    EXPECT_EQ(category_of([&] { write_table(dir / "bad.csv", t); }), ErrorCategory::kData);
}

TEST(ExitCodes, Categories) {
    EXPECT_EQ(exit_code(ErrorCategory::kConfig), 2);
    EXPECT_EQ(exit_code(ErrorCategory::kIo), 3);
    EXPECT_EQ(exit_code(ErrorCategory::kData), 4);
    EXPECT_EQ(exit_code(ErrorCategory::kNumeric), 5);
}

class Pipeline : public ::testing::Test {
protected:
    void SetUp() override {
        write_file(dir_ / "spec.json", R"({"seed": 3, "n_stocks": 12, "n_days": 3, "start_date": "2015-06-11",
            "offgrid_rows_per_stock_day": 1, "plant_index_min_bar": 50,
            "regimes": [{"buy_rate": 4, "sell_rate": 4, "coupling": 0.002}]})");
        RunConfig synth;
        synth.synth_spec = dir_ / "spec.json";
        synth.out = dir_ / "feed";
        std::ostringstream log;
        run_command("synth", synth, log);

        config_.transactions = dir_ / "feed/transactions.csv";
        config_.cache = dir_ / "feed/cache.plab";
        config_.eod_prices = dir_ / "feed/eod.csv";
        config_.intraday_prices = dir_ / "feed/intraday.csv";
        config_.min_fit_samples = 20;
        config_.out = dir_ / "report";
        write_file(dir_ / "rjf.csv", "date,rjf\n2015-06-11,1.1\n2015-06-12,0.9\n2015-06-15,1.3\n");
        config_.emotion = dir_ / "rjf.csv";
        write_file(dir_ / "cap.csv", "id,capitalization\n000001,1e9\n");
        config_.capitalization = dir_ / "cap.csv";
    }

    std::vector<std::filesystem::path> run(const std::string& cmd, const RunConfig& c) {
        std::ostringstream log;
        return run_command(cmd, c, log);
    }

    TempDir dir_;
    RunConfig config_;
};

TEST_F(Pipeline, EveryAnalysisCommandRuns) {
    run("ingest", config_);
    EXPECT_TRUE(std::filesystem::exists(config_.cache));
    for (const char* cmd : {"polarity", "ratios", "flips", "runlengths", "fit", "market", "kl", "granger", "impact",
                            "emotion"}) {
        const auto files = run(cmd, config_);
        EXPECT_FALSE(files.empty()) << cmd;
        for (const auto& f : files) {
            const auto text = slurp(f);
            EXPECT_NE(text.find("# config_hash: " + config_.hash()), std::string::npos) << f;
            EXPECT_NE(text.find("# units: "), std::string::npos) << f;
        }
    }
    const auto panel = read_table(config_.out / "panel.csv");
    EXPECT_EQ(panel.size(), 1u + 12u * 3u * 237u);
    const auto points = read_table(config_.out / "emotion_points.csv");
    ASSERT_EQ(points.size(), 3u);  // the first day has no previous close
    EXPECT_EQ(points[1][0], "2015-06-12");
    EXPECT_EQ(points[1][2], "50");  // planted index minimum
    const auto ratios = read_table(config_.out / "ratios.csv");
    EXPECT_EQ(ratios[1][6], "1e+09");
    EXPECT_EQ(ratios[5][6], "NA");
}

TEST_F(Pipeline, IdempotentAndThreadIndependent) {
    run("ingest", config_);
    auto second = config_;
    second.out = dir_ / "report2";
    second.threads = 4;
    second.cache.clear();
    for (const char* cmd : {"polarity", "flips", "fit", "kl", "granger", "impact", "market"}) {
        const auto a = run(cmd, config_);
        const auto b = run(cmd, second);
        ASSERT_EQ(a.size(), b.size());
        // Cache path single-threaded vs text path on four threads.
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(without_hash(slurp(a[i])), without_hash(slurp(b[i]))) << a[i];
        const auto again = run(cmd, config_);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(slurp(a[i]), slurp(again[i]));
    }
}

TEST_F(Pipeline, PerDayCountModeChangesHash) {
    auto per_day = config_;
    per_day.count_mode = engine::CountMode::kPerDay;
    per_day.out = dir_ / "per_day";
    EXPECT_NE(per_day.hash(), config_.hash());
    run("polarity", per_day);
    EXPECT_NE(slurp(per_day.out / "panel.csv"), "");
}

TEST_F(Pipeline, ErrorCategories) {
    RunConfig empty;
    empty.out = dir_ / "x";
    EXPECT_EQ(category_of([&] { run("polarity", empty); }), ErrorCategory::kConfig);
    EXPECT_EQ(category_of([&] { run("nonsense", config_); }), ErrorCategory::kConfig);

    auto no_prices = config_;
    no_prices.eod_prices.clear();
    EXPECT_EQ(category_of([&] { run("market", no_prices); }), ErrorCategory::kConfig);

    auto bad_index = config_;
    bad_index.index_id = "999999";
    EXPECT_EQ(category_of([&] { run("market", bad_index); }), ErrorCategory::kData);

    write_file(dir_ / "broken.csv", "trade_date,stock_id,time,price,volume,buy_serial,sell_serial\nnot,a,row\n");
    auto broken = config_;
    broken.transactions = dir_ / "broken.csv";
    broken.cache.clear();
    EXPECT_EQ(category_of([&] { run("polarity", broken); }), ErrorCategory::kData);
}

TEST(Verify, QuickSuitePasses) {
    RunConfig c;
    TempDir dir;
    c.out = dir.path();
    c.verify_scenarios = 3;
    std::ostringstream log;
    EXPECT_NO_THROW(run_command("verify", c, log)) << log.str();
    EXPECT_EQ(log.str().find("FAIL"), std::string::npos) << log.str();
}
