#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace polarity::synth {

using Rng = std::mt19937_64;

// Exact draws from p(x) ~ x^-alpha on x >= xmin by rejection from a floored
// continuous Pareto envelope. Does not evaluate any zeta function, so it is
// independent of the fitting code it is used to check.
std::vector<std::int64_t> sample_discrete_power_law(double alpha, std::int64_t xmin, std::size_t n, Rng& rng);

std::vector<std::int64_t> sample_geometric(double p, std::size_t n, Rng& rng);  // support 1, 2, ...
std::vector<double> sample_exponential(double rate, std::size_t n, Rng& rng);

// Lognormal draws with the given coefficient of variation sigma / mu.
std::vector<double> sample_lognormal_cv(double cv, double mean, std::size_t n, Rng& rng);

// Standard-normal pairs with correlation rho.
std::pair<std::vector<double>, std::vector<double>> correlated_normals(double rho, std::size_t n, Rng& rng);

// x_t white noise; y_t = coef * x_{t-1} + noise. Returns (x, y).
std::pair<std::vector<double>, std::vector<double>> lagged_pair(double coef, std::size_t n, Rng& rng);

}  // namespace polarity::synth
