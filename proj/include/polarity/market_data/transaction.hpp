#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polarity/common/date.hpp"

namespace polarity::market {

struct TransactionRecord {
    Date trade_date;
    std::string stock_id;
    TimeOfDay timestamp;
    double price = 0.0;
    std::int64_t volume = 0;
    // Order serials are assigned per day in quote order across all stocks and
    // reset every trading day. A partially filled order repeats its serial.
    std::uint64_t buy_serial = 0;
    std::uint64_t sell_serial = 0;
    // 1..237, or nullopt when the record falls outside continuous trading.
    std::optional<int> bar;

    bool off_grid() const { return !bar.has_value(); }

    bool operator==(const TransactionRecord&) const = default;
};

enum class Field { kTradeDate, kStockId, kTime, kPrice, kVolume, kBuySerial, kSellSerial, kIgnore };

// Declares how a delimited transaction file maps onto TransactionRecord.
struct Schema {
    char delimiter = ',';
    bool has_header = true;
    // One entry per column, in file order. Header names are the canonical
    // field names ("trade_date", "stock_id", "time", "price", "volume",
    // "buy_serial", "sell_serial"); ignored columns accept any header text.
    std::vector<Field> columns = {Field::kTradeDate, Field::kStockId,   Field::kTime,
                                  Field::kPrice,     Field::kVolume,    Field::kBuySerial,
                                  Field::kSellSerial};

    static Schema standard() { return Schema{}; }
    // Column names as in the header, e.g. {"stock_id", "trade_date", "_", ...}.
    // "_" or "ignore" marks a skipped column. Throws Error(config) on unknown
    // names or when a required field is absent or duplicated.
    static Schema from_names(const std::vector<std::string>& names, char delimiter = ',',
                             bool has_header = true);
};

const char* field_name(Field f);
std::optional<Field> field_from_name(const std::string& name);

}  // namespace polarity::market
