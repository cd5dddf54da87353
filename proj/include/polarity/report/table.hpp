#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace polarity::report {

// A plot-ready delimited table. Written as
//   # artifact: <name>
//   # config_hash: <hash>
//   # units: ...
//   # decision: ...   (one line each)
//   header
//   rows
// with no timestamp, so identical inputs give identical bytes.
struct Table {
    std::string name;
    std::string config_hash;
    std::string units;
    std::vector<std::string> decisions;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Row-at-a-time writer for tables too large to hold in memory. `table`
// supplies the metadata and columns; its rows are ignored.
class TableStream {
public:
    TableStream(const std::filesystem::path& path, const Table& table);
    void row(const std::vector<std::string>& cells);
    // Flushes and checks the stream; throws Error(io) on failure.
    void close();
    std::size_t rows() const { return rows_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::string name_;
    std::size_t width_ = 0;
    std::size_t rows_ = 0;
};

// Throws Error(io) on write failure and Error(data) when a row's width
// differs from the header.
void write_table(const std::filesystem::path& path, const Table& table);

// Reads a table written by write_table: skips '#' lines, returns header
// then rows.
std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path);

}  // namespace polarity::report
