#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarity/report/commands.hpp"
#include "polarity/report/run_config.hpp"

namespace {

std::string flag_name(std::string key) {
    for (auto& ch : key)
        if (ch == '_') ch = '-';
    return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace polarity;
    CLI::App app{"Trading polarity analytics for minute-level order flow"};
    app.require_subcommand(1, 1);

    std::string config_path;
    unsigned threads = 0;
    std::string out_dir;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--threads", threads, "worker threads (default: config value, else 1)")->check(CLI::Range(1u, 1024u));
    app.add_option("--out", out_dir, "output directory");

    std::map<std::string, std::string> overrides;
    for (const auto& key : report::override_keys()) {
        if (key == "threads" || key == "out") continue;
        app.add_option(flag_name(key), overrides[key], "override config key " + key)->group("Config overrides");
    }

    const std::map<std::string, std::string> about = {
        {"ingest", "parse transactions, report row counts, write the binary cache"},
        {"polarity", "per-stock minute polarity panel, moments, histogram"},
        {"ratios", "per-stock direction ratios"},
        {"flips", "per stock-day flip counts and depth"},
        {"runlengths", "same-sign run lengths and their distribution"},
        {"fit", "discrete power-law fits and burstiness of run lengths"},
        {"market", "market polarity and its correlation with index returns"},
        {"kl", "stock-day polarity/return correlations and day-to-day KL"},
        {"granger", "per-day Granger tests in both directions"},
        {"impact", "polarity against same-minute returns"},
        {"emotion", "daily polarity at the index low against an emotion index"},
        {"synth", "generate a synthetic dataset from synth_spec"},
        {"verify", "run the self-check suite on synthetic data"},
    };
    for (const auto& name : report::command_names()) {
        const auto it = about.find(name);
        app.add_subcommand(name, it == about.end() ? "" : it->second)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        nlohmann::json j = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw Error(ErrorCategory::kConfig, "cannot open config " + config_path);
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(ErrorCategory::kConfig, "config " + config_path + " is not valid JSON: " + e.what());
            }
        }
        for (const auto& [key, value] : overrides)
            if (app.count(flag_name(key))) report::apply_override(j, key, value);
        if (threads) j["threads"] = threads;
        if (!out_dir.empty()) j["out"] = out_dir;
        const auto config = report::RunConfig::from_json(j);
        report::run_command(command, config, std::cerr);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
        return report::exit_code(e.category());
    }
}
