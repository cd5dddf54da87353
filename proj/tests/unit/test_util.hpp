#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "polarity/market_data/trading_grid.hpp"
#include "polarity/market_data/transaction.hpp"

namespace polarity::testing {

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("polarity_test_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline market::TransactionRecord trade(const std::string& stock, Date date, TimeOfDay t, std::uint64_t buy,
                                       std::uint64_t sell, double price = 10.0, std::int64_t volume = 100) {
    market::TransactionRecord r;
    r.trade_date = date;
    r.stock_id = stock;
    r.timestamp = t;
    r.price = price;
    r.volume = volume;
    r.buy_serial = buy;
    r.sell_serial = sell;
    r.bar = market::assign_bar(t);
    return r;
}

inline market::TransactionRecord trade_in_bar(const std::string& stock, Date date, int bar, std::uint64_t buy,
                                              std::uint64_t sell, int second = 0) {
    return trade(stock, date, TimeOfDay(market::bar_start(bar).millis() + second * 1000), buy, sell);
}

}  // namespace polarity::testing
