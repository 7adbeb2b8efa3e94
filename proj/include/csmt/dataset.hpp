#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace csmt {

// One analysis unit: exposure S, mediator G, outcome Y and an optional
// n x q covariate block. Immutable after construction by convention;
// validate() enforces the shape and finiteness invariants.
struct Dataset {
    Eigen::VectorXd s;
    Eigen::VectorXd g;
    Eigen::VectorXd y;
    Eigen::MatrixXd x; // n x q, q may be 0
    std::vector<std::string> row_ids; // optional, empty or length n

    std::size_t n() const { return static_cast<std::size_t>(s.size()); }
    std::size_t q() const { return static_cast<std::size_t>(x.cols()); }

    void validate() const;

    // Row subset in the given order.
    Dataset select_rows(const std::vector<std::size_t>& rows) const;
};

} // namespace csmt
