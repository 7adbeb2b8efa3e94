#pragma once

#include <stdexcept>
#include <string>

namespace csmt {

// Error taxonomy mirrored by CLI exit codes:
//   config_error -> 2, data_error -> 3, numeric_error -> 4.

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct insufficient_data_error : data_error {
    explicit insufficient_data_error(const std::string& msg) : data_error(msg) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct singular_design_error : numeric_error {
    explicit singular_design_error(const std::string& msg) : numeric_error(msg) {}
};

struct degenerate_fit_error : numeric_error {
    explicit degenerate_fit_error(const std::string& msg) : numeric_error(msg) {}
};

struct degenerate_statistic_error : numeric_error {
    explicit degenerate_statistic_error(const std::string& msg) : numeric_error(msg) {}
};

} // namespace csmt
