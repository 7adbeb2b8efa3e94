#include "csmt/report.hpp"

#include "csmt/errors.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace csmt {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::vector<std::string> method_names(const std::vector<Method>& methods) {
    std::vector<std::string> names;
    names.reserve(methods.size());
    for (auto m : methods) names.push_back(method_name(m));
    return names;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) {
        throw data_error("cannot open output file: " + path);
    }
    out << body;
}

} // namespace

void AnalysisConfig::validate() const {
    roles.validate();
    if (input_path.empty()) {
        throw config_error("AnalysisConfig: input path required");
    }
    if (methods.empty()) {
        throw config_error("AnalysisConfig: at least one method required");
    }
    if (k == 1) {
        throw config_error("AnalysisConfig: K override must be >= 2");
    }
    if (m < 1) {
        throw config_error("AnalysisConfig: M must be >= 1");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw config_error("AnalysisConfig: level must lie in (0, 1)");
    }
    if (format != "json" && format != "csv") {
        throw config_error("AnalysisConfig: format must be json or csv");
    }
}

AnalysisReport run_analysis(const AnalysisConfig& config) {
    config.validate();
    auto pairs = load_csv(config.input_path, config.roles);

    AnalysisReport report;
    report.config = config;
    RandomSource src(config.seed);
    CsmtOptions opts;
    opts.equal_weights = config.equal_weights;

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& pair = pairs[i];
        AnalysisRow row;
        row.mediator = pair.mediator;
        row.outcome = pair.outcome;
        row.n_used = pair.data.n();
        row.dropped = pair.dropped_rows;
        try {
            row.k_used = config.k > 0 ? config.k : choose_k(pair.data.n());
            RandomSource pair_src = src.with(i);
            for (auto method : config.methods) {
                double p = 0.0;
                switch (method) {
                    case Method::sobel:
                        p = sobel_test(pair.data).p_value;
                        break;
                    case Method::maxp:
                        p = maxp_test(pair.data).p_value;
                        break;
                    case Method::subsampling_t:
                        p = subsampling_t_test(pair.data, row.k_used,
                                               pair_src.with(1)).p_value;
                        break;
                    case Method::csmt:
                        p = csmt(pair.data, row.k_used, config.m,
                                 pair_src.with(0), opts).p_value;
                        break;
                }
                row.p_values.emplace_back(method, p);
            }
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

json to_json(const AnalysisReport& report) {
    json doc;
    doc["schema"] = "csmt_analysis_report";
    doc["schema_version"] = kReportSchemaVersion;
    doc["seed"] = report.config.seed;
    doc["level"] = report.config.level;
    doc["m"] = report.config.m;
    doc["input"] = report.config.input_path;
    doc["exposure"] = report.config.roles.exposure;
    doc["covariates"] = report.config.roles.covariates;
    doc["methods"] = method_names(report.config.methods);
    doc["equal_weights"] = report.config.equal_weights;
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["mediator"] = row.mediator;
        r["outcome"] = row.outcome;
        r["n_used"] = row.n_used;
        r["dropped_rows"] = row.dropped;
        r["k"] = row.k_used;
        json p = json::object();
        for (const auto& [method, value] : row.p_values) {
            p[method_name(method)] = value;
        }
        r["p_values"] = p;
        if (!row.error.empty()) {
            r["error"] = row.error;
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

json to_json(const ExperimentReport& report) {
    json doc;
    doc["schema"] = "csmt_experiment_report";
    doc["schema_version"] = kReportSchemaVersion;
    doc["mode"] = report.mode;
    doc["seed"] = report.master_seed;
    doc["n"] = report.settings.n;
    doc["n_tests"] = report.settings.n_tests;
    doc["m"] = report.settings.m_splits;
    doc["k"] = report.k_used;
    doc["level"] = report.settings.level;
    doc["neglog10_level"] = report.neglog10_level();
    doc["methods"] = method_names(report.settings.methods);
    doc["exposure"] = report.exposure_note;
    if (report.mode == "size") {
        doc["mixture"] = {{"pi_00", report.mixture.pi_00},
                          {"pi_01", report.mixture.pi_01},
                          {"pi_10", report.mixture.pi_10},
                          {"pi_11", report.mixture.pi_11},
                          {"r", report.mixture.r}};
        doc["type_counts"] = {{"h00", report.count_h00},
                              {"h01", report.count_h01},
                              {"h10", report.count_h10},
                              {"h11", report.count_h11}};
    } else {
        doc["scenario"] = report.grid_spec.scenario == PowerScenario::fixed_equal
                              ? "fixed_equal"
                              : "fixed_product";
        if (report.grid_spec.scenario == PowerScenario::fixed_product) {
            doc["product"] = report.grid_spec.product;
        }
    }
    json grid = json::array();
    for (const auto& point : report.grid) {
        json g;
        g["grid_value"] = point.grid_value;
        g["alpha"] = point.alpha;
        g["beta"] = point.beta;
        json series = json::object();
        for (const auto& s : point.series) {
            json entry;
            entry["rejection_rate"] = s.rejection_rate;
            entry["p_values"] = s.p_values;
            series[method_name(s.method)] = std::move(entry);
        }
        g["series"] = std::move(series);
        grid.push_back(std::move(g));
    }
    doc["grid"] = std::move(grid);
    return doc;
}

void print_analysis_table(const AnalysisReport& report, std::ostream& out) {
    out << std::left << std::setw(20) << "mediator" << std::setw(20) << "outcome"
        << std::setw(6) << "n" << std::setw(5) << "K";
    for (auto method : report.config.methods) {
        out << std::setw(12) << method_name(method);
    }
    out << "\n";
    for (const auto& row : report.rows) {
        out << std::left << std::setw(20) << row.mediator << std::setw(20)
            << row.outcome << std::setw(6) << row.n_used << std::setw(5)
            << row.k_used;
        if (!row.error.empty()) {
            out << "error: " << row.error;
        } else {
            for (const auto& [method, p] : row.p_values) {
                (void)method;
                out << std::setw(12) << fmt4(p);
            }
        }
        out << "\n";
    }
}

void write_analysis_report(const AnalysisReport& report, std::ostream& console) {
    print_analysis_table(report, console);
    if (report.config.out_path.empty()) return;

    if (report.config.format == "json") {
        write_text_file(report.config.out_path, to_json(report).dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "mediator,outcome,n_used,dropped_rows,k";
        for (auto method : report.config.methods) {
            csv << ",p_" << method_name(method);
        }
        csv << ",error\n";
        for (const auto& row : report.rows) {
            csv << row.mediator << ',' << row.outcome << ',' << row.n_used << ','
                << row.dropped << ',' << row.k_used;
            for (std::size_t j = 0; j < report.config.methods.size(); ++j) {
                csv << ',';
                if (row.error.empty()) {
                    csv << fmt17(row.p_values[j].second);
                }
            }
            csv << ',' << row.error << "\n";
        }
        write_text_file(report.config.out_path, csv.str());
    }
    console << "wrote " << report.config.out_path << "\n";
}

std::vector<std::string> write_experiment_files(const ExperimentReport& report,
                                                const std::string& prefix) {
    std::vector<std::string> written;

    std::string report_path = prefix + "_report.json";
    write_text_file(report_path, to_json(report).dump(2) + "\n");
    written.push_back(report_path);

    // QQ plot data per method, from the first grid point (size mode has
    // exactly one). Reference line value goes in the header comment.
    for (const auto& s : report.grid.at(0).series) {
        std::ostringstream csv;
        csv << "# neglog10_level=" << fmt17(report.neglog10_level()) << "\n";
        csv << "uniform_quantile,neglog10_p\n";
        for (const auto& [u, nl] : s.qq) {
            csv << fmt17(u) << ',' << fmt17(nl) << "\n";
        }
        std::string path = prefix + "_qq_" + method_name(s.method) + ".csv";
        write_text_file(path, csv.str());
        written.push_back(path);
    }

    std::ostringstream table;
    table << "grid_value,alpha,beta";
    for (auto method : report.settings.methods) {
        table << ',' << method_name(method);
    }
    table << "\n";
    for (const auto& point : report.grid) {
        table << fmt17(point.grid_value) << ',' << fmt17(point.alpha) << ','
              << fmt17(point.beta);
        for (const auto& s : point.series) {
            table << ',' << fmt17(s.rejection_rate);
        }
        table << "\n";
    }
    std::string table_path =
        prefix + (report.mode == "size" ? "_size.csv" : "_power.csv");
    write_text_file(table_path, table.str());
    written.push_back(table_path);
    return written;
}

namespace {

template <typename T>
T get_or(const json& doc, const std::string& key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("config error at /" + key + ": wrong type");
    }
}

ExperimentSettings settings_from(const json& doc) {
    ExperimentSettings settings;
    settings.n = get_or<std::size_t>(doc, "n", settings.n);
    settings.n_tests = get_or<std::size_t>(doc, "tests", settings.n_tests);
    settings.m_splits = get_or<std::size_t>(doc, "m", settings.m_splits);
    settings.k = get_or<std::size_t>(doc, "k", settings.k);
    settings.level = get_or<double>(doc, "level", settings.level);
    settings.threads = get_or<std::size_t>(doc, "threads", settings.threads);
    if (doc.contains("methods")) {
        settings.methods.clear();
        for (const auto& name : doc.at("methods")) {
            settings.methods.push_back(parse_method(name.get<std::string>()));
        }
    }
    if (!(settings.level > 0.0 && settings.level < 1.0)) {
        throw config_error("config error at /level: must lie in (0, 1)");
    }
    return settings;
}

NullMixture mixture_from(const json& doc) {
    NullMixture mix;
    if (doc.contains("null") && doc.at("null").is_string()) {
        std::string name = doc.at("null").get<std::string>();
        if (name == "sparse") {
            mix.pi_00 = 0.8;
            mix.pi_01 = 0.1;
            mix.pi_10 = 0.1;
            mix.pi_11 = 0.0;
        } else if (name == "dense") {
            mix.pi_00 = 0.4;
            mix.pi_01 = 0.3;
            mix.pi_10 = 0.3;
            mix.pi_11 = 0.0;
        } else {
            throw config_error("config error at /null: expected sparse or dense");
        }
    } else if (doc.contains("null")) {
        const auto& m = doc.at("null");
        mix.pi_00 = get_or<double>(m, "pi_00", 1.0);
        mix.pi_01 = get_or<double>(m, "pi_01", 0.0);
        mix.pi_10 = get_or<double>(m, "pi_10", 0.0);
        mix.pi_11 = get_or<double>(m, "pi_11", 0.0);
    }
    mix.r = get_or<double>(doc, "r", mix.r);
    return mix;
}

} // namespace

ExperimentReport run_simulation(const json& config, const std::string& out_prefix) {
    if (!config.contains("mode")) {
        throw config_error("config error at /mode: required");
    }
    std::string mode = config.at("mode").get<std::string>();
    ExperimentSettings settings = settings_from(config);
    RandomSource src(get_or<std::uint64_t>(config, "seed", 0));

    ExperimentReport report;
    if (mode == "size") {
        report = run_size_experiment(mixture_from(config), settings, src);
    } else if (mode == "power") {
        PowerGrid grid;
        std::string scenario = get_or<std::string>(config, "scenario", "fixed_equal");
        if (scenario == "fixed_equal") {
            grid.scenario = PowerScenario::fixed_equal;
        } else if (scenario == "fixed_product") {
            grid.scenario = PowerScenario::fixed_product;
        } else {
            throw config_error(
                "config error at /scenario: expected fixed_equal or fixed_product");
        }
        if (!config.contains("grid")) {
            throw config_error("config error at /grid: required for power mode");
        }
        for (const auto& v : config.at("grid")) {
            grid.values.push_back(v.get<double>());
        }
        grid.product = get_or<double>(config, "product", 0.0);
        report = run_power_experiment(grid, settings, src);
    } else {
        throw config_error("config error at /mode: expected size or power");
    }

    if (!out_prefix.empty()) {
        write_experiment_files(report, out_prefix);
    }
    return report;
}

} // namespace csmt
