#pragma once

#include "csmt/csv.hpp"
#include "csmt/medtests.hpp"
#include "csmt/simulate.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace csmt {

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisConfig {
    std::string input_path;
    ColumnRoles roles;
    std::vector<Method> methods = {Method::csmt, Method::maxp, Method::sobel};
    std::size_t k = 0; // 0 = choose_k(n) per pair
    std::size_t m = 500;
    double level = 0.05;
    std::uint64_t seed = 0;
    std::string out_path;        // empty = stdout only
    std::string format = "json"; // "json" or "csv"
    bool equal_weights = false;

    void validate() const;
};

struct AnalysisRow {
    std::string mediator;
    std::string outcome;
    std::size_t n_used = 0;
    std::size_t dropped = 0;
    std::size_t k_used = 0;
    std::vector<std::pair<Method, double>> p_values;
    std::string error; // nonempty when this pair failed
};

struct AnalysisReport {
    AnalysisConfig config;
    std::vector<AnalysisRow> rows;
};

// Per-pair mediation testing over every (mediator, outcome) combination
// in the input file. Pair failures land in the row, not as exceptions.
AnalysisReport run_analysis(const AnalysisConfig& config);

nlohmann::json to_json(const AnalysisReport& report);
nlohmann::json to_json(const ExperimentReport& report);

// Human-readable p-value table (4 significant digits).
void print_analysis_table(const AnalysisReport& report, std::ostream& out);

// Writes <out_path> in the configured format and prints the table.
void write_analysis_report(const AnalysisReport& report, std::ostream& console);

// Writes <prefix>_report.json, per-method <prefix>_qq_<method>.csv and a
// <prefix>_{size,power}.csv table.
std::vector<std::string> write_experiment_files(const ExperimentReport& report,
                                                const std::string& prefix);

// Parse a declarative simulation config ("mode": "size" | "power"),
// run it and write the output files next to out_prefix.
ExperimentReport run_simulation(const nlohmann::json& config,
                                const std::string& out_prefix);

} // namespace csmt
