#include "polarity/synth/samplers.hpp"

#include <cmath>

#include "polarity/common/error.hpp"

namespace polarity::synth {

std::vector<std::int64_t> sample_discrete_power_law(double alpha, std::int64_t xmin, std::size_t n, Rng& rng) {
    if (!(alpha > 1.0) || xmin < 1) throw Error(ErrorCategory::kConfig, "power-law sampler needs alpha > 1, xmin >= 1");
    // Envelope: X = floor(Y), Y ~ Pareto(alpha - 1) on [xmin, inf). With
    // g(k) = k (1 - (1 + 1/k)^(1 - alpha)), target/envelope ~ 1 / g(k), which
    // peaks at k = xmin, so accept with probability g(xmin) / g(k).
    const auto g = [alpha](double k) { return k * (1.0 - std::pow(1.0 + 1.0 / k, 1.0 - alpha)); };
    const double g_min = g(static_cast<double>(xmin));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::int64_t> out;
    out.reserve(n);
    while (out.size() < n) {
        const double u = 1.0 - unif(rng);  // (0, 1]
        const double y = static_cast<double>(xmin) * std::pow(u, -1.0 / (alpha - 1.0));
        if (!(y < 1e15)) continue;
        const double k = std::floor(y);
        if (unif(rng) * g(k) <= g_min) out.push_back(static_cast<std::int64_t>(k));
    }
    return out;
}

std::vector<std::int64_t> sample_geometric(double p, std::size_t n, Rng& rng) {
    std::geometric_distribution<std::int64_t> dist(p);
    std::vector<std::int64_t> out(n);
    for (auto& v : out) v = dist(rng) + 1;
    return out;
}

std::vector<double> sample_exponential(double rate, std::size_t n, Rng& rng) {
    std::exponential_distribution<double> dist(rate);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

std::vector<double> sample_lognormal_cv(double cv, double mean, std::size_t n, Rng& rng) {
    const double s2 = std::log1p(cv * cv);
    const double m = std::log(mean) - 0.5 * s2;
    std::lognormal_distribution<double> dist(m, std::sqrt(s2));
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

std::pair<std::vector<double>, std::vector<double>> correlated_normals(double rho, std::size_t n, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n), y(n);
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = z(rng);
        y[i] = rho * x[i] + c * z(rng);
    }
    return {std::move(x), std::move(y)};
}

std::pair<std::vector<double>, std::vector<double>> lagged_pair(double coef, std::size_t n, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n), y(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = z(rng);
        y[t] = (t > 0 ? coef * x[t - 1] : 0.0) + z(rng);
    }
    return {std::move(x), std::move(y)};
}

}  // namespace polarity::synth
