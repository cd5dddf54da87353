#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polarity/market_data/transaction.hpp"
#include "polarity/market_data/transaction_reader.hpp"

namespace polarity::market {

// Columnar records of one (stock, day). A stock-day may be split over
// several blocks when the writer flushes early; consumers must merge.
struct CacheBlock {
    Date date;
    std::string stock_id;
    std::vector<std::int32_t> time_ms;
    std::vector<std::uint16_t> bar;  // 0 = off-grid
    std::vector<double> price;
    std::vector<std::int64_t> volume;
    std::vector<std::uint64_t> buy_serial;
    std::vector<std::uint64_t> sell_serial;

    std::size_t size() const { return time_ms.size(); }
    void clear();
    void push_back(const TransactionRecord& r);
    TransactionRecord record(std::size_t i) const;
};

// File layout, all integers little-endian:
//   header  : "PLAB1" u8 version=1 u16 reserved
//   block*  : u32 date(yyyymmdd, >0) u16 id_len id_bytes u32 n
//             i32 time_ms[n] u16 bar[n] f64 price[n] i64 volume[n]
//             u64 buy_serial[n] u64 sell_serial[n]
//   trailer : u32 0 u64 total_records u64 block_count
inline constexpr char kCacheMagic[5] = {'P', 'L', 'A', 'B', '1'};
inline constexpr std::uint8_t kCacheVersion = 1;

class CacheWriter {
public:
    // Buffers at most `max_buffered` records before flushing blocks.
    explicit CacheWriter(const std::filesystem::path& path, std::size_t max_buffered = std::size_t{1} << 22);
    ~CacheWriter();
    CacheWriter(const CacheWriter&) = delete;
    CacheWriter& operator=(const CacheWriter&) = delete;

    void add(const TransactionRecord& r);
    // Flushes pending blocks and writes the trailer. Called by the destructor
    // if omitted, but then write errors are swallowed.
    void close();

    std::uint64_t records_written() const { return total_records_; }

private:
    void flush();

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t max_buffered_;
    std::size_t buffered_ = 0;
    std::map<std::pair<Date, std::string>, CacheBlock> pending_;
    std::uint64_t total_records_ = 0;
    std::uint64_t block_count_ = 0;
    bool closed_ = false;
};

class CacheReader {
public:
    // Throws Error(io) when unreadable and Error(data) on a bad magic/version.
    explicit CacheReader(const std::filesystem::path& path);

    // Reads the next block; returns false after validating the trailer.
    bool next(CacheBlock& block);

    std::uint64_t records_read() const { return records_; }
    std::uint64_t blocks_read() const { return blocks_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::uint64_t records_ = 0;
    std::uint64_t blocks_ = 0;
    bool done_ = false;
};

// Streams a transaction file into a cache.
ParseSummary build_cache(const std::filesystem::path& transactions, const Schema& schema,
                         const std::filesystem::path& cache, double malformed_threshold = 0.001);

}  // namespace polarity::market
