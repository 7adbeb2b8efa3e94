#include "csmt/csv.hpp"

#include "csmt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace csmt {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

// Parses a cell; empty means missing (NaN). Throws on garbage.
double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
    if (cell.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    char* end = nullptr;
    double value = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0' || !std::isfinite(value)) {
        throw data_error("unparseable cell at row " + std::to_string(row) +
                         ", column \"" + column + "\": \"" + cell + "\"");
    }
    return value;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw data_error("column \"" + name + "\" not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace

void ColumnRoles::validate() const {
    if (exposure.empty()) {
        throw config_error("ColumnRoles: exposure column required");
    }
    if (mediators.empty() || outcomes.empty()) {
        throw config_error("ColumnRoles: at least one mediator and outcome required");
    }
    std::set<std::string> seen;
    seen.insert(exposure);
    for (const auto& list : {mediators, outcomes}) {
        for (const auto& c : list) {
            if (!seen.insert(c).second) {
                throw config_error(
                    "ColumnRoles: exposure, mediator and outcome columns must be "
                    "distinct; duplicate \"" + c + "\"");
            }
        }
    }
}

std::vector<PairDataset> load_csv(const std::string& path, const ColumnRoles& roles) {
    roles.validate();
    std::ifstream in(path);
    if (!in) {
        throw data_error("cannot open input file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw data_error("empty file: " + path);
    }
    const auto header = split_line(line);

    std::vector<std::string> needed;
    needed.push_back(roles.exposure);
    needed.insert(needed.end(), roles.mediators.begin(), roles.mediators.end());
    needed.insert(needed.end(), roles.outcomes.begin(), roles.outcomes.end());
    needed.insert(needed.end(), roles.covariates.begin(), roles.covariates.end());
    std::vector<std::size_t> col_idx;
    for (const auto& name : needed) {
        col_idx.push_back(column_index(header, name));
    }

    // Parse all needed cells up front; values[j][i] is column j, data row i.
    std::vector<std::vector<double>> values(needed.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        auto cells = split_line(line);
        for (std::size_t j = 0; j < needed.size(); ++j) {
            if (col_idx[j] >= cells.size()) {
                values[j].push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                values[j].push_back(parse_cell(cells[col_idx[j]], row, needed[j]));
            }
        }
    }
    const std::size_t n_rows = row;
    const std::size_t n_cov = roles.covariates.size();
    const std::size_t cov_base = 1 + roles.mediators.size() + roles.outcomes.size();

    std::vector<PairDataset> out;
    for (std::size_t mi = 0; mi < roles.mediators.size(); ++mi) {
        for (std::size_t oi = 0; oi < roles.outcomes.size(); ++oi) {
            const auto& s_col = values[0];
            const auto& g_col = values[1 + mi];
            const auto& y_col = values[1 + roles.mediators.size() + oi];

            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < n_rows; ++i) {
                bool complete = !std::isnan(s_col[i]) && !std::isnan(g_col[i]) &&
                                !std::isnan(y_col[i]);
                for (std::size_t c = 0; complete && c < n_cov; ++c) {
                    complete = !std::isnan(values[cov_base + c][i]);
                }
                if (complete) keep.push_back(i);
            }
            const std::size_t min_rows = n_cov + 4; // fit_beta lower bound
            if (keep.size() < min_rows) {
                throw insufficient_data_error(
                    "pair (" + roles.mediators[mi] + ", " + roles.outcomes[oi] +
                    "): only " + std::to_string(keep.size()) +
                    " complete rows, need at least " + std::to_string(min_rows));
            }

            PairDataset pair;
            pair.mediator = roles.mediators[mi];
            pair.outcome = roles.outcomes[oi];
            pair.dropped_rows = n_rows - keep.size();
            auto m = static_cast<Eigen::Index>(keep.size());
            pair.data.s.resize(m);
            pair.data.g.resize(m);
            pair.data.y.resize(m);
            pair.data.x.resize(m, static_cast<Eigen::Index>(n_cov));
            for (Eigen::Index i = 0; i < m; ++i) {
                auto r = keep[static_cast<std::size_t>(i)];
                pair.data.s(i) = s_col[r];
                pair.data.g(i) = g_col[r];
                pair.data.y(i) = y_col[r];
                for (std::size_t c = 0; c < n_cov; ++c) {
                    pair.data.x(i, static_cast<Eigen::Index>(c)) = values[cov_base + c][r];
                }
            }
            pair.data.validate();
            out.push_back(std::move(pair));
        }
    }
    return out;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) {
        throw data_error("cannot open output file: " + path);
    }
    out << "S,G,Y";
    for (std::size_t c = 0; c < ds.q(); ++c) {
        out << ",X" << (c + 1);
    }
    out << "\n";
    char buf[32];
    auto put = [&](double v, bool lead_comma) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        if (lead_comma) out << ',';
        out << buf;
    };
    for (std::size_t i = 0; i < ds.n(); ++i) {
        auto r = static_cast<Eigen::Index>(i);
        put(ds.s(r), false);
        put(ds.g(r), true);
        put(ds.y(r), true);
        for (Eigen::Index c = 0; c < ds.x.cols(); ++c) {
            put(ds.x(r, c), true);
        }
        out << "\n";
    }
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) {
        throw data_error("cannot open input file: " + path);
    }
    std::string line;
    if (!std::getline(probe, line)) {
        throw data_error("empty file: " + path);
    }
    auto header = split_line(line);
    ColumnRoles roles;
    roles.exposure = "S";
    roles.mediators = {"G"};
    roles.outcomes = {"Y"};
    for (const auto& col : header) {
        if (col.size() > 1 && col[0] == 'X') {
            roles.covariates.push_back(col);
        }
    }
    auto pairs = load_csv(path, roles);
    return pairs.at(0).data;
}

} // namespace csmt
