#include "polarity/coupling/granger.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "polarity/common/error.hpp"
#include "polarity/common/parallel.hpp"

namespace polarity::coupling {

namespace {

struct OlsFit {
    bool full_rank = false;
    double rss = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    OlsFit fit;
    fit.full_rank = qr.rank() == X.cols();
    if (!fit.full_rank) return fit;
    const Eigen::VectorXd beta = qr.solve(y);
    fit.rss = (y - X * beta).squaredNorm();
    return fit;
}

// Design: [1, effect lags 1..p, cause lags 1..p] (cause lags omitted when
// restricted).
Eigen::MatrixXd design(const std::vector<std::size_t>& rows, std::span<const std::optional<double>> cause,
                       std::span<const std::optional<double>> effect, int p, bool restricted) {
    const Eigen::Index cols = 1 + p + (restricted ? 0 : p);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t t = rows[r];
        const auto i = static_cast<Eigen::Index>(r);
        X(i, 0) = 1.0;
        for (int j = 1; j <= p; ++j) {
            X(i, j) = *effect[t - j];
            if (!restricted) X(i, p + j) = *cause[t - j];
        }
    }
    return X;
}

}  // namespace

GrangerTest granger_test(std::span<const std::optional<double>> cause, std::span<const std::optional<double>> effect,
                         const GrangerOptions& options) {
    if (cause.size() != effect.size()) throw Error(ErrorCategory::kData, "granger: series lengths differ");
    if (options.max_lag < 1) throw Error(ErrorCategory::kConfig, "granger: max_lag must be >= 1");
    GrangerTest test;
    const auto L = static_cast<std::size_t>(options.max_lag);

    std::vector<std::size_t> rows;
    for (std::size_t t = L; t < effect.size(); ++t) {
        bool ok = effect[t].has_value();
        for (std::size_t j = 1; ok && j <= L; ++j) ok = effect[t - j].has_value() && cause[t - j].has_value();
        if (ok) rows.push_back(t);
    }
    test.n_obs = rows.size();
    if (rows.size() < options.min_observations || rows.size() <= 2 * L + 1) {
        test.skip_reason = "too short: " + std::to_string(rows.size()) + " usable rows";
        return test;
    }

    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) y(static_cast<Eigen::Index>(r)) = *effect[rows[r]];
    const double n = static_cast<double>(rows.size());
    const double scale = y.squaredNorm();

    double best_bic = std::numeric_limits<double>::infinity();
    OlsFit best_fit;
    for (int p = 1; p <= options.max_lag; ++p) {
        const OlsFit fit = ols(design(rows, cause, effect, p, false), y);
        if (!fit.full_rank) {
            test.skip_reason = "collinear regressors at lag " + std::to_string(p);
            return test;
        }
        if (fit.rss <= 1e-24 * scale) {
            test.skip_reason = "degenerate: perfect fit at lag " + std::to_string(p);
            return test;
        }
        const double bic = n * std::log(fit.rss / n) + static_cast<double>(2 * p + 1) * std::log(n);
        if (bic < best_bic) {
            best_bic = bic;
            best_fit = fit;
            test.lag = p;
        }
    }

    const OlsFit restricted = ols(design(rows, cause, effect, test.lag, true), y);
    if (!restricted.full_rank) {
        test.skip_reason = "collinear restricted regressors";
        return test;
    }
    test.df1 = test.lag;
    test.df2 = static_cast<int>(rows.size()) - 2 * test.lag - 1;
    const double diff = std::max(restricted.rss - best_fit.rss, 0.0);
    test.f_stat = (diff / test.df1) / (best_fit.rss / test.df2);
    const boost::math::fisher_f_distribution<double> dist(test.df1, test.df2);
    test.p_value = boost::math::cdf(boost::math::complement(dist, test.f_stat));
    test.reject = test.p_value < options.significance;
    test.tested = true;
    return test;
}

GrangerSummary granger_pass_rates(std::span<const GrangerDayInput> days, const GrangerOptions& options,
                                  unsigned threads) {
    GrangerSummary summary;
    summary.days.resize(days.size() * 2);
    parallel_for(days.size(), threads, [&](std::size_t i) {
        const auto& day = days[i];
        summary.days[2 * i] = {day.date, GrangerDirection::kPolarityToReturn,
                               granger_test(day.polarity, day.returns, options)};
        summary.days[2 * i + 1] = {day.date, GrangerDirection::kReturnToPolarity,
                                   granger_test(day.returns, day.polarity, options)};
    });
    for (const auto& r : summary.days) {
        auto& rate = r.direction == GrangerDirection::kPolarityToReturn ? summary.polarity_to_return
                                                                        : summary.return_to_polarity;
        if (!r.test.tested) {
            ++rate.skipped;
            continue;
        }
        ++rate.tested;
        if (r.test.reject) ++rate.passed;
    }
    const auto finish = [](DirectionPassRate& rate) {
        if (rate.tested > 0) rate.rate = static_cast<double>(rate.passed) / static_cast<double>(rate.tested);
    };
    finish(summary.polarity_to_return);
    finish(summary.return_to_polarity);
    return summary;
}

}  // namespace polarity::coupling
