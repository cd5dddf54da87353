#include "polarity/tailfit/burstiness.hpp"

#include <cmath>

namespace polarity::tailfit {

std::optional<BurstinessResult> burstiness(std::span<const double> lengths) {
    if (lengths.empty()) return std::nullopt;
    BurstinessResult r;
    r.n = lengths.size();
    double sum = 0.0;
    for (double v : lengths) sum += v;
    r.mean_tau = sum / static_cast<double>(r.n);
    if (r.n > 1) {
        double ss = 0.0;
        for (double v : lengths) ss += (v - r.mean_tau) * (v - r.mean_tau);
        r.std_tau = std::sqrt(ss / static_cast<double>(r.n - 1));
    }
    r.B = (r.std_tau - r.mean_tau) / (r.std_tau + r.mean_tau);
    return r;
}

}  // namespace polarity::tailfit
