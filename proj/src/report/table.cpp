#include "polarity/report/table.hpp"

#include <fstream>

#include "polarity/common/error.hpp"

namespace polarity::report {

namespace {

void write_row(std::ofstream& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << row[i];
    }
    out << '\n';
}

}  // namespace

TableStream::TableStream(const std::filesystem::path& path, const Table& table)
    : path_(path), name_(table.name), width_(table.columns.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
    out_ << "# artifact: " << table.name << '\n';
    out_ << "# config_hash: " << table.config_hash << '\n';
    out_ << "# units: " << table.units << '\n';
    for (const auto& d : table.decisions) out_ << "# decision: " << d << '\n';
    write_row(out_, table.columns);
}

void TableStream::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw Error(ErrorCategory::kData,
                    name_ + ": row width " + std::to_string(cells.size()) + " != " + std::to_string(width_));
    write_row(out_, cells);
    ++rows_;
}

void TableStream::close() {
    out_.flush();
    if (!out_) throw Error(ErrorCategory::kIo, "write failed: " + path_.string());
    out_.close();
}

void write_table(const std::filesystem::path& path, const Table& table) {
    TableStream stream(path, table);
    for (const auto& row : table.rows) stream.row(row);
    stream.close();
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace polarity::report
