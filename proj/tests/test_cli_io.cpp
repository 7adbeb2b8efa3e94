#include "csmt/csv.hpp"
#include "csmt/errors.hpp"
#include "csmt/report.hpp"
#include "csmt/simulate.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csmt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    auto dir = fs::temp_directory_path() / "csmt_test_io";
    fs::create_directories(dir);
    return dir;
}

// 82-row trial-shaped file: exposure, 7 mediators, 2 outcomes, 1 covariate.
fs::path write_trial_csv(std::size_t missing_row = 0) {
    auto path = tmp_dir() / "trial.csv";
    std::ofstream out(path);
    out << "arm,m1,m2,m3,m4,m5,m6,m7,il6,crp,age\n";
    Rng rng(RandomSource(2025).with(1));
    for (int i = 0; i < 82; ++i) {
        out << (i < 42 ? 1 : 0);
        for (int c = 0; c < 10; ++c) {
            if (missing_row > 0 && i + 1 == static_cast<int>(missing_row) && c == 0) {
                out << ",";
            } else {
                out << "," << 0.1 * static_cast<double>(c) + rng.normal();
            }
        }
        out << "\n";
    }
    return path;
}

ColumnRoles trial_roles() {
    ColumnRoles roles;
    roles.exposure = "arm";
    roles.mediators = {"m1", "m2", "m3", "m4", "m5", "m6", "m7"};
    roles.outcomes = {"il6", "crp"};
    roles.covariates = {"age"};
    return roles;
}

} // namespace

TEST_CASE("load_csv yields one dataset per mediator-outcome pair") {
    auto pairs = load_csv(write_trial_csv().string(), trial_roles());
    REQUIRE(pairs.size() == 14);
    for (const auto& pair : pairs) {
        CHECK(pair.data.n() == 82);
        CHECK(pair.data.q() == 1);
        CHECK(pair.dropped_rows == 0);
    }
    CHECK(pairs[0].mediator == "m1");
    CHECK(pairs[0].outcome == "il6");
    CHECK(pairs[1].outcome == "crp");
}

TEST_CASE("rows with missing active cells are dropped and counted") {
    auto pairs = load_csv(write_trial_csv(10).string(), trial_roles());
    for (const auto& pair : pairs) {
        if (pair.mediator == "m1") {
            CHECK(pair.data.n() == 81);
            CHECK(pair.dropped_rows == 1);
        } else {
            CHECK(pair.data.n() == 82); // missing cell only affects m1 pairs
        }
    }
}

TEST_CASE("parse errors name the row and column") {
    auto path = tmp_dir() / "bad.csv";
    std::ofstream out(path);
    out << "S,G,Y\n1,2,3\n0,4,5\n1,6,7\n0,8,9\n1,oops,11\n0,12,13\n1,1,2\n0,2,1\n";
    out.close();
    ColumnRoles roles;
    roles.exposure = "S";
    roles.mediators = {"G"};
    roles.outcomes = {"Y"};
    try {
        load_csv(path.string(), roles);
        FAIL("expected data_error");
    } catch (const data_error& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("row 5") != std::string::npos);
        CHECK(msg.find("\"G\"") != std::string::npos);
    }
}

TEST_CASE("missing column and duplicate roles are reported") {
    auto path = write_trial_csv();
    auto roles = trial_roles();
    roles.outcomes.push_back("nonexistent");
    CHECK_THROWS_AS(load_csv(path.string(), roles), data_error);

    auto dupes = trial_roles();
    dupes.outcomes.push_back("m1");
    CHECK_THROWS_AS(load_csv(path.string(), dupes), config_error);
}

TEST_CASE("dataset CSV round trip is value-identical") {
    SimulationParams params;
    params.alpha = 0.4;
    params.beta = 0.3;
    params.n = 60;
    auto ds = generate_dataset(params, RandomSource(77));
    auto path = tmp_dir() / "roundtrip.csv";
    write_dataset_csv(ds, path.string());
    auto back = read_dataset_csv(path.string());
    CHECK((ds.s.array() == back.s.array()).all());
    CHECK((ds.g.array() == back.g.array()).all());
    CHECK((ds.y.array() == back.y.array()).all());
    CHECK((ds.x.array() == back.x.array()).all());
}

TEST_CASE("run_analysis produces one row per pair and is deterministic") {
    AnalysisConfig config;
    config.input_path = write_trial_csv().string();
    config.roles = trial_roles();
    config.m = 20;
    config.seed = 11;
    auto report = run_analysis(config);
    REQUIRE(report.rows.size() == 14);
    for (const auto& row : report.rows) {
        CHECK(row.error.empty());
        CHECK(row.k_used == 4); // floor(0.5 sqrt(82))
        REQUIRE(row.p_values.size() == 3);
        for (const auto& [method, p] : row.p_values) {
            (void)method;
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
    auto again = run_analysis(config);
    CHECK(to_json(report).dump() == to_json(again).dump());
}

namespace {

// Minimal structural check against the shipped schema: every key the
// schema marks required must be present, recursing into object schemas.
void check_required(const json& schema, const json& doc) {
    if (schema.contains("required")) {
        for (const auto& key : schema.at("required")) {
            INFO("missing key: ", key.get<std::string>());
            REQUIRE(doc.contains(key.get<std::string>()));
        }
    }
    if (!schema.contains("properties")) return;
    for (const auto& [key, sub] : schema.at("properties").items()) {
        if (!doc.contains(key)) continue;
        if (sub.contains("items") && doc.at(key).is_array()) {
            for (const auto& item : doc.at(key)) {
                check_required(sub.at("items"), item);
            }
        } else if (doc.at(key).is_object()) {
            check_required(sub, doc.at(key));
        }
    }
}

json load_schema(const std::string& name) {
    auto path = fs::path(CSMT_SOURCE_DIR) / "schemas" / name;
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

} // namespace

TEST_CASE("analysis report validates against its schema") {
    AnalysisConfig config;
    config.input_path = write_trial_csv().string();
    config.roles = trial_roles();
    config.roles.mediators = {"m1"};
    config.m = 10;
    auto doc = to_json(run_analysis(config));
    check_required(load_schema("analysis_report.schema.json"), doc);
    CHECK(doc.at("schema_version") == kReportSchemaVersion);
}

TEST_CASE("experiment report validates against its schema and writes files") {
    json config = {{"mode", "size"}, {"null", "sparse"}, {"n", 100},
                   {"tests", 20},    {"m", 5},           {"seed", 3}};
    auto prefix = (tmp_dir() / "exp").string();
    auto report = run_simulation(config, prefix);
    auto doc = to_json(report);
    check_required(load_schema("experiment_report.schema.json"), doc);

    CHECK(fs::exists(prefix + "_report.json"));
    CHECK(fs::exists(prefix + "_size.csv"));
    CHECK(fs::exists(prefix + "_qq_csmt.csv"));
    CHECK(fs::exists(prefix + "_qq_sobel.csv"));

    std::ifstream qq(prefix + "_qq_csmt.csv");
    std::string line;
    std::getline(qq, line);
    CHECK(line.find("neglog10_level=") != std::string::npos);
}

TEST_CASE("simulation config errors carry a pointer-style path") {
    try {
        run_simulation(json{{"tests", 5}}, "");
        FAIL("expected config_error");
    } catch (const config_error& ex) {
        CHECK(std::string(ex.what()).find("/mode") != std::string::npos);
    }
    CHECK_THROWS_AS(run_simulation(json{{"mode", "bogus"}}, ""), config_error);
    CHECK_THROWS_AS(
        run_simulation(json{{"mode", "size"}, {"level", 2.0}}, ""), config_error);
}

TEST_CASE("power simulation config applies the default product pairing") {
    json config = {{"mode", "power"},       {"scenario", "fixed_product"},
                   {"grid", {1.0}},         {"n", 200},
                   {"tests", 10},           {"m", 5},
                   {"seed", 1}};
    auto report = run_simulation(config, "");
    REQUIRE(report.grid.size() == 1);
    CHECK(report.grid[0].alpha * report.grid[0].beta ==
          doctest::Approx(0.2).epsilon(1e-12));
}
