#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "polarity/synth/samplers.hpp"
#include "polarity/tailfit/burstiness.hpp"
#include "polarity/tailfit/hurwitz_zeta.hpp"
#include "polarity/tailfit/power_law.hpp"

using namespace polarity;
using namespace polarity::tailfit;

namespace {

// Direct partial sum plus the integral tail and first Euler-Maclaurin term.
double zeta_by_summation(double s, double q) {
    const int n = 200000;
    long double sum = 0.0L;
    for (int k = n - 1; k >= 0; --k) sum += std::pow(static_cast<long double>(q + k), -static_cast<long double>(s));
    const double a = q + n;
    return static_cast<double>(sum) + std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
}

}  // namespace

TEST(HurwitzZeta, KnownValues) {
    const double pi = std::numbers::pi;
    EXPECT_NEAR(hurwitz_zeta(2.0, 1.0), pi * pi / 6.0, 1e-14);
    EXPECT_NEAR(hurwitz_zeta(4.0, 1.0), std::pow(pi, 4) / 90.0, 1e-14);
    EXPECT_NEAR(hurwitz_zeta(2.0, 0.5), pi * pi / 2.0, 1e-13);  // (2^s - 1) zeta(s)
}

TEST(HurwitzZeta, ShiftIdentityAndSummation) {
    for (double s : {1.5, 2.0, 3.5, 4.5, 8.0, 25.0})
        for (double q : {1.0, 2.0, 3.0, 7.0, 40.0}) {
            const double lhs = hurwitz_zeta(s, q) - hurwitz_zeta(s, q + 1.0);
            EXPECT_NEAR(lhs / std::pow(q, -s), 1.0, 1e-10) << s << " " << q;
        }
    for (double s : {2.5, 3.5, 4.5})
        for (double q : {1.0, 5.0})
            EXPECT_NEAR(hurwitz_zeta(s, q) / zeta_by_summation(s, q), 1.0, 1e-11);
}

TEST(PowerLaw, RefusesSmallOrDegenerateSamples) {
    std::vector<std::int64_t> few(48, 3);
    few.push_back(4);
    EXPECT_TRUE(std::holds_alternative<FitRefusal>(fit_power_law(few)));
    std::vector<std::int64_t> constant(100, 2);
    EXPECT_TRUE(std::holds_alternative<FitRefusal>(fit_power_law(constant)));
    std::vector<std::int64_t> zero(100, 1);
    zero[0] = 0;
    EXPECT_TRUE(std::holds_alternative<FitRefusal>(fit_power_law(zero)));
}

TEST(PowerLaw, RecoversPlantedAlpha) {
    synth::Rng rng(17);
    for (double alpha : {2.5, 3.5}) {
        const auto x = synth::sample_discrete_power_law(alpha, 1, 20000, rng);
        const auto fit = std::get<PowerLawFit>(fit_power_law(x));
        EXPECT_NEAR(fit.alpha, alpha, 0.12);
        EXPECT_GT(fit.stderr_alpha, 0.0);
        EXPECT_LE(fit.ks_distance, 0.05);
        EXPECT_EQ(fit.n_total, x.size());
    }
}

TEST(PowerLaw, FixedXminMatchesClosedFormAtLargeXmin) {
    // For xmin large the discrete MLE approaches 1 + n / sum log(x / (xmin - 1/2)).
    synth::Rng rng(4);
    const auto x = synth::sample_discrete_power_law(3.0, 50, 20000, rng);
    PowerLawOptions opt;
    opt.fixed_xmin = 50;
    const auto fit = std::get<PowerLawFit>(fit_power_law(x, opt));
    double s = 0.0;
    for (auto v : x) s += std::log(v / 49.5);
    EXPECT_NEAR(fit.alpha, 1.0 + x.size() / s, 0.01);
    EXPECT_EQ(fit.xmin, 50);
    EXPECT_EQ(fit.n_tail, x.size());
}

TEST(PowerLaw, PermutationInvariant) {
    synth::Rng rng(8);
    auto x = synth::sample_discrete_power_law(3.0, 1, 3000, rng);
    const auto a = std::get<PowerLawFit>(fit_power_law(x));
    std::shuffle(x.begin(), x.end(), rng);
    PowerLawOptions opt;
    opt.threads = 3;
    const auto b = std::get<PowerLawFit>(fit_power_law(x, opt));
    EXPECT_EQ(a.alpha, b.alpha);
    EXPECT_EQ(a.xmin, b.xmin);
    EXPECT_EQ(a.ks_distance, b.ks_distance);
}

TEST(PowerLaw, CcdfIsNormalized) {
    EXPECT_DOUBLE_EQ(power_law_ccdf(3.0, 2, 2), 1.0);
    const double p2 = power_law_ccdf(3.0, 2, 2) - power_law_ccdf(3.0, 2, 3);
    EXPECT_NEAR(p2, std::pow(2.0, -3.0) / hurwitz_zeta(3.0, 2.0), 1e-14);
    EXPECT_LT(power_law_ccdf(3.0, 2, 100), power_law_ccdf(3.0, 2, 10));
}

TEST(Burstiness, Anchors) {
    EXPECT_FALSE(burstiness(std::vector<double>{}));
    EXPECT_EQ(burstiness(std::vector<double>{5.0})->B, -1.0);
    EXPECT_EQ(burstiness(std::vector<double>(50, 3.0))->B, -1.0);
    const auto b = burstiness(std::vector<double>{1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(b->mean_tau, 2.0);
    EXPECT_DOUBLE_EQ(b->std_tau, 1.0);
    EXPECT_DOUBLE_EQ(b->B, -1.0 / 3.0);
}

TEST(Burstiness, ScaleInvariant) {
    synth::Rng rng(2);
    const auto x = synth::sample_lognormal_cv(1.7, 3.0, 5000, rng);
    std::vector<double> scaled(x.size());
    std::transform(x.begin(), x.end(), scaled.begin(), [](double v) { return 60.0 * v; });
    EXPECT_NEAR(burstiness(x)->B, burstiness(scaled)->B, 1e-12);
}

TEST(Burstiness, MatchesCoefficientOfVariation) {
    synth::Rng rng(6);
    for (double cv : {0.5, 1.0, 3.0}) {
        const auto x = synth::sample_lognormal_cv(cv, 2.0, 200000, rng);
        // B = (cv - 1) / (cv + 1)
        EXPECT_NEAR(burstiness(x)->B, (cv - 1.0) / (cv + 1.0), cv > 2 ? 0.05 : 0.01);
    }
}

TEST(PowerLaw, ScanFindsTailStartAboveFlatBody) {
    synth::Rng rng(23);
    auto x = synth::sample_discrete_power_law(3.0, 8, 20000, rng);
    std::uniform_int_distribution<std::int64_t> body(1, 7);
    for (int i = 0; i < 20000; ++i) x.push_back(body(rng));
    const auto fit = std::get<PowerLawFit>(fit_power_law(x));
    EXPECT_GE(fit.xmin, 7);
    EXPECT_LE(fit.xmin, 10);
    EXPECT_NEAR(fit.alpha, 3.0, 0.15);
    EXPECT_LT(fit.n_tail, x.size());
}
