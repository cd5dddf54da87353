#include "polarity/engine/polarity.hpp"

#include <algorithm>

namespace polarity::engine {

std::uint32_t count_distinct(std::span<std::uint64_t> serials) {
    std::sort(serials.begin(), serials.end());
    return static_cast<std::uint32_t>(std::unique(serials.begin(), serials.end()) - serials.begin());
}

ManTimes count_mantimes(std::span<const market::TransactionRecord> batch) {
    std::vector<std::uint64_t> buys, sells;
    buys.reserve(batch.size());
    sells.reserve(batch.size());
    for (const auto& r : batch) {
        buys.push_back(r.buy_serial);
        sells.push_back(r.sell_serial);
    }
    return {count_distinct(buys), count_distinct(sells)};
}

}  // namespace polarity::engine
