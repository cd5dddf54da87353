#include "polarity/market_data/transaction.hpp"

#include <array>

#include "polarity/common/error.hpp"

namespace polarity::market {

namespace {

constexpr std::array<std::pair<Field, const char*>, 7> kNames = {{
    {Field::kTradeDate, "trade_date"},
    {Field::kStockId, "stock_id"},
    {Field::kTime, "time"},
    {Field::kPrice, "price"},
    {Field::kVolume, "volume"},
    {Field::kBuySerial, "buy_serial"},
    {Field::kSellSerial, "sell_serial"},
}};

}  // namespace

const char* field_name(Field f) {
    for (const auto& [field, name] : kNames)
        if (field == f) return name;
    return "_";
}

std::optional<Field> field_from_name(const std::string& name) {
    if (name == "_" || name == "ignore") return Field::kIgnore;
    for (const auto& [field, n] : kNames)
        if (name == n) return field;
    return std::nullopt;
}

Schema Schema::from_names(const std::vector<std::string>& names, char delimiter, bool has_header) {
    Schema schema;
    schema.delimiter = delimiter;
    schema.has_header = has_header;
    schema.columns.clear();
    std::array<int, 7> seen{};
    for (const auto& name : names) {
        auto f = field_from_name(name);
        if (!f) throw Error(ErrorCategory::kConfig, "unknown transaction column '" + name + "'");
        if (*f != Field::kIgnore) ++seen[static_cast<std::size_t>(*f)];
        schema.columns.push_back(*f);
    }
    for (const auto& [field, name] : kNames) {
        const int count = seen[static_cast<std::size_t>(field)];
        if (count != 1)
            throw Error(ErrorCategory::kConfig, std::string("schema must map column '") + name +
                                                    "' exactly once (found " + std::to_string(count) + ")");
    }
    return schema;
}

}  // namespace polarity::market
