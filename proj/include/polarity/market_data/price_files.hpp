#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarity/common/date.hpp"

namespace polarity::market {

struct EodPrice {
    Date date;
    std::string id;  // stock or index symbol
    double close = 0.0;

    bool operator==(const EodPrice&) const = default;
};

struct IntradayPrice {
    Date date;
    std::string id;
    int bar = 1;                       // 1..237
    std::optional<double> last_price;  // missing when nothing traded in the bar

    bool operator==(const IntradayPrice&) const = default;
};

struct PriceFileOptions {
    char delimiter = ',';
    bool has_header = true;
};

// Columns (date, id, close). Non-positive prices, malformed rows and
// duplicate (id, date) keys are hard errors naming the offending line.
std::vector<EodPrice> read_eod_prices(const std::filesystem::path& path, PriceFileOptions options = {});

// Columns (date, id, bar_or_time, last_price). The third column is either a
// bar index 1..237 or a time of day; times outside the grid are skipped.
// An empty or "NA" last_price is a missing cell.
std::vector<IntradayPrice> read_intraday_prices(const std::filesystem::path& path,
                                                PriceFileOptions options = {});

void write_eod_prices(const std::filesystem::path& path, const std::vector<EodPrice>& rows);
void write_intraday_prices(const std::filesystem::path& path, const std::vector<IntradayPrice>& rows);

}  // namespace polarity::market
