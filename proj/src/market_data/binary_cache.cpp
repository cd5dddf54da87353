#include "polarity/market_data/binary_cache.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>

#include "polarity/common/error.hpp"
#include "polarity/market_data/transaction_reader.hpp"

namespace polarity::market {

namespace {

template <typename T>
T byteswap_if_needed(T v) {
    if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
        return v;
    } else {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
}

template <typename T>
void put(std::ofstream& out, T v) {
    v = byteswap_if_needed(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void put_array(std::ofstream& out, const std::vector<T>& values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(T)));
    } else {
        for (T v : values) put(out, v);
    }
}

template <typename T>
bool get(std::ifstream& in, T& v) {
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) return false;
    v = byteswap_if_needed(v);
    return true;
}

template <typename T>
bool get_array(std::ifstream& in, std::vector<T>& values, std::size_t n) {
    values.resize(n);
    if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(T)))) return false;
    if constexpr (std::endian::native != std::endian::little)
        for (auto& v : values) v = byteswap_if_needed(v);
    return true;
}

}  // namespace

void CacheBlock::clear() {
    time_ms.clear();
    bar.clear();
    price.clear();
    volume.clear();
    buy_serial.clear();
    sell_serial.clear();
}

void CacheBlock::push_back(const TransactionRecord& r) {
    time_ms.push_back(r.timestamp.millis());
    bar.push_back(static_cast<std::uint16_t>(r.bar.value_or(0)));
    price.push_back(r.price);
    volume.push_back(r.volume);
    buy_serial.push_back(r.buy_serial);
    sell_serial.push_back(r.sell_serial);
}

TransactionRecord CacheBlock::record(std::size_t i) const {
    TransactionRecord r;
    r.trade_date = date;
    r.stock_id = stock_id;
    r.timestamp = TimeOfDay(time_ms[i]);
    r.price = price[i];
    r.volume = volume[i];
    r.buy_serial = buy_serial[i];
    r.sell_serial = sell_serial[i];
    if (bar[i] != 0) r.bar = bar[i];
    return r;
}

CacheWriter::CacheWriter(const std::filesystem::path& path, std::size_t max_buffered)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), max_buffered_(max_buffered) {
    if (!out_) throw Error(ErrorCategory::kIo, "cannot create cache " + path.string());
    out_.write(kCacheMagic, sizeof kCacheMagic);
    put<std::uint8_t>(out_, kCacheVersion);
    put<std::uint16_t>(out_, 0);
}

CacheWriter::~CacheWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void CacheWriter::add(const TransactionRecord& r) {
    auto& block = pending_[{r.trade_date, r.stock_id}];
    if (block.size() == 0) {
        block.date = r.trade_date;
        block.stock_id = r.stock_id;
    }
    block.push_back(r);
    if (++buffered_ >= max_buffered_) flush();
}

void CacheWriter::flush() {
    for (auto& [key, block] : pending_) {
        if (block.stock_id.size() > 0xFFFF) throw Error(ErrorCategory::kData, "stock id too long for cache");
        put<std::uint32_t>(out_, static_cast<std::uint32_t>(block.date.yyyymmdd()));
        put<std::uint16_t>(out_, static_cast<std::uint16_t>(block.stock_id.size()));
        out_.write(block.stock_id.data(), static_cast<std::streamsize>(block.stock_id.size()));
        put<std::uint32_t>(out_, static_cast<std::uint32_t>(block.size()));
        put_array(out_, block.time_ms);
        put_array(out_, block.bar);
        put_array(out_, block.price);
        put_array(out_, block.volume);
        put_array(out_, block.buy_serial);
        put_array(out_, block.sell_serial);
        total_records_ += block.size();
        ++block_count_;
    }
    pending_.clear();
    buffered_ = 0;
    if (!out_) throw Error(ErrorCategory::kIo, "write failed on " + path_.string());
}

void CacheWriter::close() {
    if (closed_) return;
    closed_ = true;
    flush();
    put<std::uint32_t>(out_, 0);
    put<std::uint64_t>(out_, total_records_);
    put<std::uint64_t>(out_, block_count_);
    out_.close();
    if (!out_) throw Error(ErrorCategory::kIo, "write failed on " + path_.string());
}

CacheReader::CacheReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw Error(ErrorCategory::kIo, "cannot open cache " + path.string());
    char magic[sizeof kCacheMagic];
    std::uint8_t version = 0;
    std::uint16_t reserved = 0;
    if (!in_.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
        throw Error(ErrorCategory::kData, path.string() + ": not a PLAB1 cache");
    if (!get(in_, version) || !get(in_, reserved) || version != kCacheVersion)
        throw Error(ErrorCategory::kData, path.string() + ": unsupported cache version " + std::to_string(version));
}

bool CacheReader::next(CacheBlock& block) {
    if (done_) return false;
    auto truncated = [&] { return Error(ErrorCategory::kData, path_.string() + ": truncated cache"); };
    std::uint32_t date = 0;
    if (!get(in_, date)) throw truncated();
    if (date == 0) {
        std::uint64_t total = 0, blocks = 0;
        if (!get(in_, total) || !get(in_, blocks)) throw truncated();
        if (total != records_ || blocks != blocks_)
            throw Error(ErrorCategory::kData, path_.string() + ": trailer counts do not match contents");
        done_ = true;
        return false;
    }
    std::uint16_t id_len = 0;
    std::uint32_t n = 0;
    if (!get(in_, id_len)) throw truncated();
    block.stock_id.resize(id_len);
    if (!in_.read(block.stock_id.data(), id_len) || !get(in_, n)) throw truncated();
    block.date = Date(static_cast<std::int32_t>(date));
    if (!get_array(in_, block.time_ms, n) || !get_array(in_, block.bar, n) || !get_array(in_, block.price, n) ||
        !get_array(in_, block.volume, n) || !get_array(in_, block.buy_serial, n) ||
        !get_array(in_, block.sell_serial, n))
        throw truncated();
    records_ += n;
    ++blocks_;
    return true;
}

ParseSummary build_cache(const std::filesystem::path& transactions, const Schema& schema,
                         const std::filesystem::path& cache, double malformed_threshold) {
    CacheWriter writer(cache);
    ReaderOptions options;
    options.malformed_threshold = malformed_threshold;
    auto summary =
        for_each_transaction(transactions, schema, [&](const TransactionRecord& r) { writer.add(r); }, options);
    writer.close();
    return summary;
}

}  // namespace polarity::market
