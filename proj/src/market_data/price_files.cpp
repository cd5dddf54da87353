#include "polarity/market_data/price_files.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <tuple>

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

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = line.find(delim);
        out.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::uint64_t line, const std::string& why) {
    throw Error(ErrorCategory::kData, path.string() + ":" + std::to_string(line) + ": " + why);
}

double parse_price(const std::filesystem::path& path, std::uint64_t line, std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(path, line, "bad price '" + std::string(s) + "'");
    if (!(v > 0.0)) fail(path, line, "non-positive price " + std::string(s));
    return v;
}

// Calls fn(fields, line_no) for each non-blank data row.
template <typename Fn>
void scan(const std::filesystem::path& path, const PriceFileOptions& options, std::size_t ncols, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open price file " + path.string());
    std::string line;
    std::uint64_t line_no = 0;
    if (options.has_header) {
        if (!std::getline(in, line)) fail(path, 1, "missing header");
        ++line_no;
        if (split(trim(line), options.delimiter).size() != ncols)
            fail(path, line_no, "header must have " + std::to_string(ncols) + " columns");
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        auto fields = split(t, options.delimiter);
        if (fields.size() != ncols)
            fail(path, line_no, "expected " + std::to_string(ncols) + " fields, found " + std::to_string(fields.size()));
        fn(fields, line_no);
    }
    if (in.bad()) throw Error(ErrorCategory::kIo, "read error on " + path.string());
}

}  // namespace

std::vector<EodPrice> read_eod_prices(const std::filesystem::path& path, PriceFileOptions options) {
    std::vector<EodPrice> rows;
    std::set<std::pair<std::string, Date>> seen;
    scan(path, options, 3, [&](const std::vector<std::string_view>& f, std::uint64_t line) {
        auto date = Date::parse(f[0]);
        if (!date) fail(path, line, "bad date '" + std::string(f[0]) + "'");
        if (f[1].empty()) fail(path, line, "empty id");
        EodPrice p{*date, std::string(f[1]), parse_price(path, line, f[2])};
        if (!seen.emplace(p.id, p.date).second)
            fail(path, line, "duplicate close for " + p.id + " on " + p.date.to_string());
        rows.push_back(std::move(p));
    });
    return rows;
}

std::vector<IntradayPrice> read_intraday_prices(const std::filesystem::path& path, PriceFileOptions options) {
    std::vector<IntradayPrice> rows;
    std::set<std::tuple<std::string, Date, int>> seen;
    scan(path, options, 4, [&](const std::vector<std::string_view>& f, std::uint64_t line) {
        auto date = Date::parse(f[0]);
        if (!date) fail(path, line, "bad date '" + std::string(f[0]) + "'");
        if (f[1].empty()) fail(path, line, "empty id");
        int bar = 0;
        if (f[2].find(':') != std::string_view::npos) {
            auto t = TimeOfDay::parse(f[2]);
            if (!t) fail(path, line, "bad time '" + std::string(f[2]) + "'");
            auto b = assign_bar(*t);
            if (!b) return;  // outside continuous trading
            bar = *b;
        } else {
            auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), bar);
            if (ec != std::errc() || ptr != f[2].data() + f[2].size() || bar < 1 || bar > kBarsPerDay)
                fail(path, line, "bar must be 1.." + std::to_string(kBarsPerDay) + ", got '" + std::string(f[2]) + "'");
        }
        IntradayPrice p{*date, std::string(f[1]), bar, std::nullopt};
        if (!f[3].empty() && f[3] != "NA") p.last_price = parse_price(path, line, f[3]);
        if (!seen.emplace(p.id, p.date, p.bar).second)
            fail(path, line, "duplicate bar " + std::to_string(bar) + " for " + p.id + " on " + p.date.to_string());
        rows.push_back(std::move(p));
    });
    return rows;
}

void write_eod_prices(const std::filesystem::path& path, const std::vector<EodPrice>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
    out << "date,id,close\n";
    for (const auto& r : rows) out << r.date.to_string() << ',' << r.id << ',' << format_double(r.close) << '\n';
}

void write_intraday_prices(const std::filesystem::path& path, const std::vector<IntradayPrice>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
    out << "date,id,bar,last_price\n";
    for (const auto& r : rows)
        out << r.date.to_string() << ',' << r.id << ',' << r.bar << ',' << format_double(r.last_price) << '\n';
}

}  // namespace polarity::market
