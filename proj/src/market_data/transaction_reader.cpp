#include "polarity/market_data/transaction_reader.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "polarity/common/error.hpp"
#include "polarity/common/format.hpp"
#include "polarity/market_data/trading_grid.hpp"

namespace polarity::market {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits on `delim` into at most `out.size()` fields; returns the field count
// (which exceeds out.size() when there are too many fields).
template <std::size_t N>
std::size_t split(std::string_view line, char delim, std::array<std::string_view, N>& out) {
    std::size_t n = 0;
    while (true) {
        const auto pos = line.find(delim);
        const auto field = trim(line.substr(0, pos));
        if (n < N) out[n] = field;
        ++n;
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return n;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    if constexpr (std::is_unsigned_v<T>) {
        if (s.front() == '+') s.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

constexpr std::size_t kMaxColumns = 32;

}  // namespace

std::string ParseSummary::describe() const {
    std::ostringstream os;
    os << data_rows << " rows, " << parsed << " parsed, " << malformed << " malformed ("
       << format_double(malformed_fraction() * 100.0) << "%), " << off_grid << " off-grid";
    for (const auto& s : samples) os << "\n  line " << s.line << ": " << s.reason;
    return os.str();
}

bool parse_transaction_row(std::string_view line, const Schema& schema, TransactionRecord& out,
                           std::string& reason) {
    std::array<std::string_view, kMaxColumns> fields;
    const std::size_t n = split(line, schema.delimiter, fields);
    if (n != schema.columns.size()) {
        reason = "expected " + std::to_string(schema.columns.size()) + " fields, found " + std::to_string(n);
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto f = fields[i];
        switch (schema.columns[i]) {
            case Field::kTradeDate: {
                auto d = Date::parse(f);
                if (!d) { reason = "bad trade_date '" + std::string(f) + "'"; return false; }
                out.trade_date = *d;
                break;
            }
            case Field::kStockId:
                if (f.empty()) { reason = "empty stock_id"; return false; }
                out.stock_id.assign(f);
                break;
            case Field::kTime: {
                auto t = TimeOfDay::parse(f);
                if (!t) { reason = "bad time '" + std::string(f) + "'"; return false; }
                out.timestamp = *t;
                break;
            }
            case Field::kPrice:
                if (!parse_number(f, out.price) || !(out.price > 0.0)) {
                    reason = "price must be a positive number, got '" + std::string(f) + "'";
                    return false;
                }
                break;
            case Field::kVolume:
                if (!parse_number(f, out.volume) || out.volume <= 0) {
                    reason = "volume must be a positive integer, got '" + std::string(f) + "'";
                    return false;
                }
                break;
            case Field::kBuySerial:
                if (!parse_number(f, out.buy_serial) || out.buy_serial == 0) {
                    reason = "buy_serial must be a positive integer, got '" + std::string(f) + "'";
                    return false;
                }
                break;
            case Field::kSellSerial:
                if (!parse_number(f, out.sell_serial) || out.sell_serial == 0) {
                    reason = "sell_serial must be a positive integer, got '" + std::string(f) + "'";
                    return false;
                }
                break;
            case Field::kIgnore:
                break;
        }
    }
    out.bar = assign_bar(out.timestamp);
    return true;
}

TransactionReader::TransactionReader(const std::filesystem::path& path, Schema schema, ReaderOptions options)
    : path_(path), schema_(std::move(schema)), options_(options), in_(path, std::ios::binary) {
    if (!in_) throw Error(ErrorCategory::kIo, "cannot open transactions file " + path.string());
    if (schema_.columns.size() > kMaxColumns)
        throw Error(ErrorCategory::kConfig, "schema declares too many columns");
    if (!schema_.has_header) return;
    if (!std::getline(in_, line_)) throw Error(ErrorCategory::kData, path.string() + ": missing header");
    ++line_no_;
    std::array<std::string_view, kMaxColumns> names;
    const std::size_t n = split(std::string_view(line_), schema_.delimiter, names);
    bool ok = n == schema_.columns.size();
    for (std::size_t i = 0; ok && i < n; ++i) {
        if (schema_.columns[i] == Field::kIgnore) continue;
        ok = names[i] == field_name(schema_.columns[i]);
    }
    if (!ok)
        throw Error(ErrorCategory::kData,
                    path.string() + ": header '" + std::string(trim(line_)) + "' does not match schema");
}

bool TransactionReader::next(TransactionRecord& out) {
    if (finished_) return false;
    while (std::getline(in_, line_)) {
        ++line_no_;
        const std::string_view line = trim(line_);
        if (line.empty()) continue;
        ++summary_.data_rows;
        std::string reason;
        if (parse_transaction_row(line, schema_, out, reason)) {
            ++summary_.parsed;
            if (out.off_grid()) ++summary_.off_grid;
            return true;
        }
        ++summary_.malformed;
        if (summary_.samples.size() < options_.max_samples) summary_.samples.push_back({line_no_, reason});
    }
    finished_ = true;
    if (in_.bad()) throw Error(ErrorCategory::kIo, "read error on " + path_.string());
    if (summary_.malformed_fraction() > options_.malformed_threshold)
        throw Error(ErrorCategory::kData, path_.string() + ": malformed rows exceed threshold " +
                                              format_double(options_.malformed_threshold) + ": " +
                                              summary_.describe());
    return false;
}

ParseSummary for_each_transaction(const std::filesystem::path& path, const Schema& schema,
                                  const std::function<void(const TransactionRecord&)>& sink,
                                  ReaderOptions options) {
    TransactionReader reader(path, schema, options);
    TransactionRecord rec;
    while (reader.next(rec)) sink(rec);
    return reader.summary();
}

std::string format_transaction_row(const TransactionRecord& r, char delimiter) {
    std::string row;
    row.reserve(64);
    row += r.trade_date.to_string();
    row += delimiter;
    row += r.stock_id;
    row += delimiter;
    row += r.timestamp.to_string();
    row += delimiter;
    row += format_double(r.price);
    row += delimiter;
    row += std::to_string(r.volume);
    row += delimiter;
    row += std::to_string(r.buy_serial);
    row += delimiter;
    row += std::to_string(r.sell_serial);
    return row;
}

void write_transactions(const std::filesystem::path& path, const std::vector<TransactionRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
    out << "trade_date,stock_id,time,price,volume,buy_serial,sell_serial\n";
    for (const auto& r : records) out << format_transaction_row(r) << '\n';
    if (!out) throw Error(ErrorCategory::kIo, "write failed on " + path.string());
}

}  // namespace polarity::market
