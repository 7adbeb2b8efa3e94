#pragma once

#include "csmt/dataset.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace csmt {

// Column-role mapping for an input CSV: one exposure, one or more
// mediator and outcome columns (every pair gets its own Dataset), and
// optional covariates.
struct ColumnRoles {
    std::string exposure;
    std::vector<std::string> mediators;
    std::vector<std::string> outcomes;
    std::vector<std::string> covariates;

    void validate() const;
};

struct PairDataset {
    std::string mediator;
    std::string outcome;
    Dataset data;
    std::size_t dropped_rows = 0; // listwise deletions for this pair
};

// Load a comma-delimited UTF-8 file with a header row. Empty cells are
// missing values; rows missing any active cell are dropped per pair.
// Unparseable cells raise a data_error naming (row, column).
std::vector<PairDataset> load_csv(const std::string& path, const ColumnRoles& roles);

// Write a Dataset back out with columns S,G,Y,X1..Xq at full precision.
void write_dataset_csv(const Dataset& ds, const std::string& path);

// Load a file written by write_dataset_csv.
Dataset read_dataset_csv(const std::string& path);

} // namespace csmt
