#include "polarity/tailfit/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "polarity/common/parallel.hpp"
#include "polarity/tailfit/hurwitz_zeta.hpp"

namespace polarity::tailfit {

namespace {

constexpr double kAlphaMin = 1.0 + 1e-6;

struct Histogram {
    std::vector<std::int64_t> values;  // distinct, ascending
    std::vector<std::size_t> counts;
    std::vector<std::size_t> tail_count;  // samples >= values[i]
    std::vector<double> tail_log_sum;     // sum of log x over samples >= values[i]
};

Histogram histogram(const std::vector<std::int64_t>& sorted) {
    Histogram h;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        h.values.push_back(sorted[i]);
        h.counts.push_back(j - i);
        i = j;
    }
    const std::size_t m = h.values.size();
    h.tail_count.assign(m + 1, 0);
    h.tail_log_sum.assign(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        h.tail_count[i] = h.tail_count[i + 1] + h.counts[i];
        h.tail_log_sum[i] = h.tail_log_sum[i + 1] + static_cast<double>(h.counts[i]) * std::log(static_cast<double>(h.values[i]));
    }
    return h;
}

struct Candidate {
    bool valid = false;
    PowerLawFit fit;
};

double fisher_information(double alpha, double xmin) {
    // d^2/da^2 log zeta(a, xmin), i.e. Var[log X] under the fitted law.
    const double h = std::min(1e-3, (alpha - 1.0) / 4.0);
    const auto f = [&](double a) { return std::log(hurwitz_zeta(a, xmin)); };
    return (f(alpha + h) - 2.0 * f(alpha) + f(alpha - h)) / (h * h);
}

Candidate fit_at(const Histogram& h, std::size_t k, std::size_t n_total, double alpha_max) {
    Candidate c;
    const std::size_t n_tail = h.tail_count[k];
    if (k + 1 >= h.values.size() || n_tail < 2) return c;  // tail holds a single value
    const double xmin = static_cast<double>(h.values[k]);
    const double log_sum = h.tail_log_sum[k];
    const double n = static_cast<double>(n_tail);
    const auto nll = [&](double a) { return n * std::log(hurwitz_zeta(a, xmin)) + a * log_sum; };
    const auto [alpha, value] = boost::math::tools::brent_find_minima(nll, kAlphaMin, alpha_max, 50);
    (void)value;

    const double z = hurwitz_zeta(alpha, xmin);
    double ks = 0.0;
    std::size_t cum = 0;
    for (std::size_t j = k; j < h.values.size(); ++j) {
        const double x = static_cast<double>(h.values[j]);
        // Just below the jump at x the empirical CDF still equals cum.
        if (j > k && h.values[j] - 1 > h.values[j - 1]) {
            const double model = 1.0 - hurwitz_zeta(alpha, x) / z;
            ks = std::max(ks, std::abs(static_cast<double>(cum) / n - model));
        }
        cum += h.counts[j];
        const double model = 1.0 - hurwitz_zeta(alpha, x + 1.0) / z;
        ks = std::max(ks, std::abs(static_cast<double>(cum) / n - model));
    }

    c.valid = true;
    c.fit.alpha = alpha;
    c.fit.xmin = h.values[k];
    c.fit.ks_distance = ks;
    c.fit.n_tail = n_tail;
    c.fit.n_total = n_total;
    const double info = fisher_information(alpha, xmin);
    c.fit.stderr_alpha = info > 0.0 ? 1.0 / std::sqrt(n * info) : std::numeric_limits<double>::infinity();
    return c;
}

}  // namespace

double power_law_ccdf(double alpha, std::int64_t xmin, std::int64_t x) {
    if (x <= xmin) return 1.0;
    return hurwitz_zeta(alpha, static_cast<double>(x)) / hurwitz_zeta(alpha, static_cast<double>(xmin));
}

FitOutcome fit_power_law(std::span<const std::int64_t> lengths, const PowerLawOptions& options) {
    if (lengths.size() < options.min_samples)
        return FitRefusal{"too few samples: " + std::to_string(lengths.size()) + " < " +
                          std::to_string(options.min_samples)};
    std::vector<std::int64_t> sorted(lengths.begin(), lengths.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 1) return FitRefusal{"lengths must be positive integers"};
    if (sorted.front() == sorted.back()) return FitRefusal{"degenerate sample: all values equal"};
    const Histogram h = histogram(sorted);
    const std::size_t n_total = lengths.size();

    std::vector<std::size_t> candidates;
    if (options.fixed_xmin) {
        auto it = std::lower_bound(h.values.begin(), h.values.end(), *options.fixed_xmin);
        if (it == h.values.end()) return FitRefusal{"fixed xmin above every observation"};
        candidates.push_back(static_cast<std::size_t>(it - h.values.begin()));
    } else {
        // Linear-interpolation quantile of the sample.
        const double pos = options.xmin_quantile * static_cast<double>(n_total - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, n_total - 1);
        const double q = static_cast<double>(sorted[lo]) +
                         (pos - static_cast<double>(lo)) * static_cast<double>(sorted[hi] - sorted[lo]);
        for (std::size_t i = 0; i < h.values.size() && static_cast<double>(h.values[i]) <= q; ++i)
            candidates.push_back(i);
    }

    std::vector<Candidate> results(candidates.size());
    parallel_for(candidates.size(), options.threads,
                 [&](std::size_t i) { results[i] = fit_at(h, candidates[i], n_total, options.alpha_max); });

    const Candidate* best = nullptr;
    for (const auto& c : results) {
        if (!c.valid) continue;
        if (!best || c.fit.ks_distance < best->fit.ks_distance) best = &c;
    }
    if (!best) return FitRefusal{"degenerate tail: no xmin candidate leaves two distinct values"};
    return best->fit;
}

}  // namespace polarity::tailfit
