#include "polarity/synth/brute_force.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "polarity/common/error.hpp"

namespace polarity::synth {

BruteForceResult brute_force_recount(const std::filesystem::path& transactions) {
    std::ifstream in(transactions);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open " + transactions.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 7) throw Error(ErrorCategory::kData, "malformed row: " + line);
        rows.push_back(std::move(fields));
    }

    using CellKey = std::tuple<std::string, std::string, int>;
    std::map<CellKey, std::pair<std::set<std::uint64_t>, std::set<std::uint64_t>>> cells;
    BruteForceResult result;
    for (const auto& r : rows) {
        int h = 0, m = 0, s = 0;
        if (std::sscanf(r[2].c_str(), "%d:%d:%d", &h, &m, &s) != 3)
            throw Error(ErrorCategory::kData, "bad time " + r[2]);
        const int second_of_day = h * 3600 + m * 60 + s;
        int bar = 0;
        if (second_of_day >= 9 * 3600 + 30 * 60 && second_of_day < 11 * 3600 + 30 * 60)
            bar = (second_of_day - (9 * 3600 + 30 * 60)) / 60 + 1;
        else if (second_of_day >= 13 * 3600 && second_of_day < 14 * 3600 + 57 * 60)
            bar = (second_of_day - 13 * 3600) / 60 + 121;
        if (bar == 0) {
            ++result.off_grid;
            continue;
        }
        auto& cell = cells[{r[1], r[0], bar}];
        cell.first.insert(std::stoull(r[5]));
        cell.second.insert(std::stoull(r[6]));
    }

    std::vector<engine::PolarityPanel::CellCount> counts;
    for (const auto& [key, sets] : cells) {
        const auto& [stock, date_text, bar] = key;
        auto date = Date::parse(date_text);
        if (!date) throw Error(ErrorCategory::kData, "bad date " + date_text);
        counts.push_back({stock, *date, bar,
                          {static_cast<std::uint32_t>(sets.first.size()), static_cast<std::uint32_t>(sets.second.size())}});
    }
    result.panel = engine::PolarityPanel::from_counts(counts);
    return result;
}

}  // namespace polarity::synth
