#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "polarity/market_data/transaction.hpp"

namespace polarity::market {

struct MalformedRow {
    std::uint64_t line = 0;
    std::string reason;
};

struct ParseSummary {
    std::uint64_t data_rows = 0;  // non-blank rows after the header
    std::uint64_t parsed = 0;
    std::uint64_t malformed = 0;
    std::uint64_t off_grid = 0;  // parsed rows outside the bar grid
    std::vector<MalformedRow> samples;  // first few malformed rows

    double malformed_fraction() const {
        return data_rows == 0 ? 0.0 : static_cast<double>(malformed) / static_cast<double>(data_rows);
    }
    std::string describe() const;
};

struct ReaderOptions {
    // Abort when malformed / data_rows exceeds this once the stream ends.
    double malformed_threshold = 0.001;
    std::size_t max_samples = 10;
};

// Single-pass streaming reader for delimited transaction files. Memory use
// is one line buffer regardless of file size.
class TransactionReader {
public:
    // Throws Error(io) if the file cannot be opened and Error(data) if the
    // header does not match the schema.
    TransactionReader(const std::filesystem::path& path, Schema schema, ReaderOptions options = {});

    // Fills `out` with the next well-formed record. Returns false at end of
    // file, after enforcing the malformed-row threshold (Error(data)).
    bool next(TransactionRecord& out);

    const ParseSummary& summary() const { return summary_; }

private:
    bool parse_line(std::string_view line, TransactionRecord& out, std::string& reason) const;

    std::filesystem::path path_;
    Schema schema_;
    ReaderOptions options_;
    std::ifstream in_;
    std::string line_;
    std::uint64_t line_no_ = 0;
    ParseSummary summary_;
    bool finished_ = false;
};

// Convenience wrapper: streams every record into `sink` and returns the summary.
ParseSummary for_each_transaction(const std::filesystem::path& path, const Schema& schema,
                                  const std::function<void(const TransactionRecord&)>& sink,
                                  ReaderOptions options = {});

// Parses one data row; exposed for tests and for the binary-cache importer.
bool parse_transaction_row(std::string_view line, const Schema& schema, TransactionRecord& out,
                           std::string& reason);

// Writes records in the standard schema (with header).
void write_transactions(const std::filesystem::path& path, const std::vector<TransactionRecord>& records);
std::string format_transaction_row(const TransactionRecord& r, char delimiter = ',');

}  // namespace polarity::market
