#include "polarity/report/verify.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <variant>

#include "polarity/common/format.hpp"
#include "polarity/coupling/corr_dist.hpp"
#include "polarity/coupling/granger.hpp"
#include "polarity/coupling/pearson.hpp"
#include "polarity/engine/panel.hpp"
#include "polarity/flips/flip_analytics.hpp"
#include "polarity/market_data/binary_cache.hpp"
#include "polarity/market_data/transaction_reader.hpp"
#include "polarity/synth/brute_force.hpp"
#include "polarity/synth/samplers.hpp"
#include "polarity/synth/scenario.hpp"
#include "polarity/tailfit/burstiness.hpp"
#include "polarity/tailfit/power_law.hpp"

namespace polarity::report {

namespace {

// Removes its directory on scope exit.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(unsigned long long tag) {
        path = std::filesystem::temp_directory_path() / ("polarity_verify_" + std::to_string(tag));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

synth::ScenarioSpec random_spec(synth::Rng& rng) {
    std::uniform_int_distribution<int> stocks(1, 20), days(1, 3), offgrid(0, 3), split(2, 236);
    std::uniform_real_distribution<double> rate(0.0, 6.0);
    synth::ScenarioSpec spec;
    spec.seed = rng();
    spec.n_stocks = stocks(rng);
    spec.n_days = days(rng);
    spec.offgrid_rows_per_stock_day = offgrid(rng);
    const int cut = split(rng);
    synth::RegimeSpec a, b;
    a.name = "a";
    a.buy_rate = rate(rng);
    a.sell_rate = rate(rng);
    a.last_day = b.last_day = spec.n_days - 1;
    a.last_bar = cut;
    b.name = "b";
    b.buy_rate = rate(rng);
    b.sell_rate = rate(rng);
    b.first_bar = cut + 1;
    spec.regimes = {a, b};
    return spec;
}

CheckResult oracle_check(std::size_t scenarios, synth::Rng& rng, unsigned threads) {
    CheckResult r{"oracle-equivalence", true, ""};
    TempDir dir(rng());
    const auto file = dir.path / "transactions.csv";
    const auto cache = dir.path / "transactions.plab";
    std::size_t cells = 0;
    for (std::size_t i = 0; i < scenarios; ++i) {
        const auto scenario = synth::generate(random_spec(rng));
        market::write_transactions(file, scenario.transactions);

        engine::PanelBuilder from_text;
        market::for_each_transaction(file, market::Schema::standard(),
                                     [&](const market::TransactionRecord& t) { from_text.add(t); });
        const auto engine_panel = from_text.build(threads);

        market::build_cache(file, market::Schema::standard(), cache);
        engine::PanelBuilder from_cache;
        market::CacheReader reader(cache);
        market::CacheBlock block;
        while (reader.next(block)) from_cache.add(block);

        const auto brute = synth::brute_force_recount(file);
        if (!(engine_panel == brute.panel) || !(from_cache.build(threads) == engine_panel)) {
            r.pass = false;
            r.detail = "scenario " + std::to_string(i) + " differs from the brute-force recount";
            return r;
        }
        cells += engine_panel.non_empty_cells();
    }
    r.detail = std::to_string(scenarios) + " scenarios, " + std::to_string(cells) + " non-empty cells identical";
    return r;
}

CheckResult worked_example() {
    market::BarArray<std::optional<double>> row{};
    const double values[] = {0.2, -0.3, -0.4, -0.2, 0.3};
    for (int i = 0; i < 5; ++i) row[i] = values[i];
    const auto fs = flips::build_flip_series(row);
    const auto stats = flips::flip_stats(fs);
    const auto runs = flips::run_lengths(fs);
    const bool ok = stats.flip_count == 2 && stats.effective_length == 5 && stats.standardized_flips == 0.4 &&
                    std::abs(stats.depth - 1.0) < 1e-12 && runs.size() == 1 && runs[0].length == 3 &&
                    runs[0].sign == flips::Sign::kNegative;
    return {"worked-example", ok,
            "flips " + std::to_string(stats.flip_count) + ", depth " + format_double(stats.depth) + ", runs " +
                std::to_string(runs.size())};
}

CheckResult power_law_check(synth::Rng& rng, unsigned threads) {
    const double alpha = 3.5;
    const auto sample = synth::sample_discrete_power_law(alpha, 1, 20000, rng);
    tailfit::PowerLawOptions options;
    options.threads = threads;
    const auto outcome = tailfit::fit_power_law(sample, options);
    const auto* fit = std::get_if<tailfit::PowerLawFit>(&outcome);
    if (!fit) return {"power-law-recovery", false, std::get<tailfit::FitRefusal>(outcome).reason};
    return {"power-law-recovery", std::abs(fit->alpha - alpha) <= 0.15,
            "alpha " + format_double(fit->alpha) + " (planted 3.5, n 20000, xmin " + std::to_string(fit->xmin) + ")"};
}

CheckResult burstiness_check(synth::Rng& rng) {
    const std::vector<double> constant(100, 4.0);
    const auto b_const = tailfit::burstiness(constant);
    const auto b_exp = tailfit::burstiness(synth::sample_exponential(1.0, 50000, rng));
    const bool ok = b_const && b_const->B == -1.0 && b_exp && std::abs(b_exp->B) <= 0.03;
    return {"burstiness-anchors", ok,
            "constant " + format_double(b_const ? b_const->B : NAN) + ", exponential " +
                format_double(b_exp ? b_exp->B : NAN)};
}

CheckResult kl_check() {
    const std::vector<double> p{0.25, 0.75}, q{0.5, 0.5};
    const double expected = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);
    const double got = coupling::kl_divergence(p, q);
    const bool ok = coupling::kl_divergence(p, p) == 0.0 && std::abs(got - expected) <= 1e-12;
    return {"kl-divergence", ok, "two-bin " + format_double(got)};
}

CheckResult pearson_check(synth::Rng& rng) {
    const auto [x, y] = synth::correlated_normals(-0.7, 15000, rng);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    const auto same = coupling::pearson(x, x);
    const auto flipped = coupling::pearson(x, neg);
    const auto planted = coupling::pearson(x, y);
    const bool ok = same == 1.0 && flipped == -1.0 && planted && *planted >= -0.72 && *planted <= -0.68;
    return {"pearson", ok, "planted -0.7 -> " + format_double(planted)};
}

CheckResult granger_check(synth::Rng& rng, unsigned threads) {
    std::vector<coupling::GrangerDayInput> days;
    for (int d = 0; d < 40; ++d) {
        const auto [x, y] = synth::lagged_pair(0.5, 237, rng);
        coupling::GrangerDayInput in;
        in.polarity.assign(x.begin(), x.end());
        in.returns.assign(y.begin(), y.end());
        days.push_back(std::move(in));
    }
    const auto s = coupling::granger_pass_rates(days, {}, threads);
    const double fwd = s.polarity_to_return.rate.value_or(0.0);
    const double back = s.return_to_polarity.rate.value_or(1.0);
    return {"granger-planted-lag", fwd >= 0.9 && back <= 0.2,
            "forward " + format_double(fwd) + ", reverse " + format_double(back) + " over 40 days"};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::size_t scenarios, unsigned long long seed, unsigned threads) {
    synth::Rng rng(seed);
    std::vector<CheckResult> out;
    out.push_back(oracle_check(scenarios, rng, threads));
    out.push_back(worked_example());
    out.push_back(power_law_check(rng, threads));
    out.push_back(burstiness_check(rng));
    out.push_back(kl_check());
    out.push_back(pearson_check(rng));
    out.push_back(granger_check(rng, threads));
    return out;
}

}  // namespace polarity::report
