#include "csmt/calibrate.hpp"
#include "csmt/errors.hpp"
#include "csmt/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumericError = 4;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) {
        throw csmt::config_error("cannot open config file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw csmt::config_error("config parse error in " + path + ": " + ex.what());
    }
}

// Presets trade replication count for runtime; flags still win.
void apply_preset(json& config, const std::string& preset) {
    if (preset.empty()) return;
    if (preset == "paper") {
        if (!config.contains("tests")) config["tests"] = 500;
        if (!config.contains("m")) config["m"] = 500;
    } else if (preset == "ci") {
        if (!config.contains("tests")) config["tests"] = 100;
        if (!config.contains("m")) config["m"] = 100;
    } else {
        throw csmt::config_error("unknown preset: " + preset);
    }
}

struct SimFlags {
    std::string config_path;
    std::string preset;
    std::string out = "experiment";
    std::string null_name;
    std::string scenario;
    std::string methods;
    std::string grid;
    double r = -1.0;
    double level = -1.0;
    double product = -1.0;
    long long n = -1, tests = -1, m = -1, k = -1, threads = -1;
    long long seed = -1;
};

void add_sim_flags(CLI::App* cmd, SimFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config document");
    cmd->add_option("--preset", flags.preset, "paper or ci");
    cmd->add_option("--out", flags.out, "output path prefix");
    cmd->add_option("--n", flags.n, "sample size per test");
    cmd->add_option("--tests", flags.tests, "number of simulation runs");
    cmd->add_option("--m", flags.m, "Cauchy combination splits M");
    cmd->add_option("--k", flags.k, "subsample count K (0 = auto)");
    cmd->add_option("--level", flags.level, "nominal level");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)");
    cmd->add_option("--methods", flags.methods,
                    "comma list: csmt,sobel,maxp,subsampling_t");
}

json merge_sim_flags(const SimFlags& flags, const std::string& mode) {
    json config = load_config_file(flags.config_path);
    apply_preset(config, flags.preset);
    config["mode"] = mode;
    if (flags.n >= 0) config["n"] = flags.n;
    if (flags.tests >= 0) config["tests"] = flags.tests;
    if (flags.m >= 0) config["m"] = flags.m;
    if (flags.k >= 0) config["k"] = flags.k;
    if (flags.level >= 0) config["level"] = flags.level;
    if (flags.seed >= 0) config["seed"] = flags.seed;
    if (flags.threads >= 0) config["threads"] = flags.threads;
    if (flags.r >= 0) config["r"] = flags.r;
    if (flags.product >= 0) config["product"] = flags.product;
    if (!flags.null_name.empty()) config["null"] = flags.null_name;
    if (!flags.scenario.empty()) config["scenario"] = flags.scenario;
    if (!flags.methods.empty()) {
        config["methods"] = split_list(flags.methods);
    }
    if (!flags.grid.empty()) {
        json grid = json::array();
        for (const auto& item : split_list(flags.grid)) {
            grid.push_back(std::stod(item));
        }
        config["grid"] = grid;
    }
    return config;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Mediation testing: Sobel, MaxP and the Cauchy-combined "
                 "studentized subsampling test, with simulation drivers"};
    app.require_subcommand(1);

    // --- test: per-pair analysis of a CSV dataset ---
    auto* test_cmd = app.add_subcommand("test", "run mediation tests on a CSV file");
    csmt::AnalysisConfig analysis;
    std::string mediators, outcomes, covariates, methods;
    long long test_seed = 0, test_k = 0, test_m = 500;
    test_cmd->add_option("--input", analysis.input_path, "input CSV")->required();
    test_cmd->add_option("--exposure", analysis.roles.exposure, "exposure column")
        ->required();
    test_cmd->add_option("--mediators", mediators, "mediator columns (comma list)")
        ->required();
    test_cmd->add_option("--outcomes", outcomes, "outcome columns (comma list)")
        ->required();
    test_cmd->add_option("--covariates", covariates, "covariate columns");
    test_cmd->add_option("--methods", methods, "comma list of methods");
    test_cmd->add_option("--k", test_k, "subsample count K (0 = auto)");
    test_cmd->add_option("--m", test_m, "Cauchy combination splits M");
    test_cmd->add_option("--level", analysis.level, "nominal level");
    test_cmd->add_option("--seed", test_seed, "master seed");
    test_cmd->add_option("--out", analysis.out_path, "output file");
    test_cmd->add_option("--format", analysis.format, "json or csv");
    test_cmd->add_flag("--equal-weights", analysis.equal_weights,
                       "use w_m = 1/M instead of random weights");

    // --- simulate size / power ---
    auto* sim_cmd = app.add_subcommand("simulate", "run a simulation study");
    sim_cmd->require_subcommand(1);
    auto* size_cmd = sim_cmd->add_subcommand("size", "empirical size study");
    SimFlags size_flags;
    add_sim_flags(size_cmd, size_flags);
    size_cmd->add_option("--null", size_flags.null_name, "sparse or dense");
    size_cmd->add_option("--r", size_flags.r, "signal magnitude r");

    auto* power_cmd = sim_cmd->add_subcommand("power", "empirical power study");
    SimFlags power_flags;
    add_sim_flags(power_cmd, power_flags);
    power_cmd->add_option("--scenario", power_flags.scenario,
                          "fixed_equal or fixed_product");
    power_cmd->add_option("--grid", power_flags.grid,
                          "comma list of signal values or ratios");
    power_cmd->add_option("--product", power_flags.product,
                          "alpha*beta for fixed_product (0 = by n)");

    // --- calibrate: distributional oracles ---
    auto* cal_cmd = app.add_subcommand(
        "calibrate", "Monte Carlo checks of the limiting null laws");
    long long cal_draws = 100000, cal_k = 12, cal_seed = 0;
    cal_cmd->add_option("--draws", cal_draws, "Monte Carlo draws");
    cal_cmd->add_option("--k", cal_k, "subsample count for the studentized oracle");
    cal_cmd->add_option("--seed", cal_seed, "master seed");

    CLI11_PARSE(app, argc, argv);

    if (test_cmd->parsed()) {
        analysis.roles.mediators = split_list(mediators);
        analysis.roles.outcomes = split_list(outcomes);
        analysis.roles.covariates = split_list(covariates);
        if (!methods.empty()) {
            analysis.methods.clear();
            for (const auto& name : split_list(methods)) {
                analysis.methods.push_back(csmt::parse_method(name));
            }
        }
        if (test_k < 0 || test_m < 1 || test_seed < 0) {
            throw csmt::config_error("--k, --m and --seed must be nonnegative");
        }
        analysis.k = static_cast<std::size_t>(test_k);
        analysis.m = static_cast<std::size_t>(test_m);
        analysis.seed = static_cast<std::uint64_t>(test_seed);
        auto report = csmt::run_analysis(analysis);
        csmt::write_analysis_report(report, std::cout);
        return 0;
    }

    if (size_cmd->parsed()) {
        csmt::run_simulation(merge_sim_flags(size_flags, "size"), size_flags.out);
        std::cout << "wrote " << size_flags.out << "_*.{json,csv}\n";
        return 0;
    }
    if (power_cmd->parsed()) {
        csmt::run_simulation(merge_sim_flags(power_flags, "power"), power_flags.out);
        std::cout << "wrote " << power_flags.out << "_*.{json,csv}\n";
        return 0;
    }

    if (cal_cmd->parsed()) {
        if (cal_draws < 1 || cal_k < 2 || cal_seed < 0) {
            throw csmt::config_error("calibrate: --draws >= 1, --k >= 2 required");
        }
        auto results = csmt::run_calibration(
            static_cast<std::size_t>(cal_draws), static_cast<std::size_t>(cal_k),
            csmt::RandomSource(static_cast<std::uint64_t>(cal_seed)));
        bool all_ok = true;
        for (const auto& r : results) {
            bool ok = r.p_value > 0.01;
            all_ok = all_ok && ok;
            std::printf("%-32s KS = %.5f  p = %.4f  [%s]\n", r.name.c_str(),
                        r.statistic, r.p_value, ok ? "ok" : "reject");
        }
        return all_ok ? 0 : kExitNumericError;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const csmt::config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const csmt::data_error& ex) {
        std::cerr << "data error: " << ex.what() << "\n";
        return kExitDataError;
    } catch (const csmt::numeric_error& ex) {
        std::cerr << "numerical error: " << ex.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
