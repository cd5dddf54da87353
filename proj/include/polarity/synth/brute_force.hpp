#pragma once

#include <cstdint>
#include <filesystem>

#include "polarity/engine/panel.hpp"

namespace polarity::synth {

struct BruteForceResult {
    engine::PolarityPanel panel;
    std::uint64_t off_grid = 0;
};

// Deliberately naive second implementation of the man-times count: loads
// every row of a standard-schema transaction file, groups by
// (stock, date, bar) in ordered maps and counts distinct serials with sets.
// Shares nothing with the streaming reader or PanelBuilder. Test use only.
BruteForceResult brute_force_recount(const std::filesystem::path& transactions);

}  // namespace polarity::synth
