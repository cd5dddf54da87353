#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace polarity::report {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Quick self-check of the pipeline against its oracles: brute-force recount
// on `scenarios` random synthetic feeds plus closed-form cases for flips,
// tail fitting, burstiness, KL, Pearson and Granger.
std::vector<CheckResult> run_verify_suite(std::size_t scenarios, unsigned long long seed, unsigned threads);

}  // namespace polarity::report
