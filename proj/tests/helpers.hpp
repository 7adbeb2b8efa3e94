#pragma once

#include "csmt/dataset.hpp"
#include "csmt/random.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace testing_support {

// Independent OLS oracle: normal equations solved by hand-rolled
// Gauss-Jordan elimination, nothing shared with the library's QR path.
struct BruteFit {
    double estimate;
    double std_error;
    double t_stat;
};

inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::fabs(a[col][col]) < 1e-300) {
            throw std::runtime_error("gauss_solve: singular");
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// OLS of y on the columns of design; returns the target column's
// coefficient, classical standard error and t-statistic.
inline BruteFit brute_force_ols(const std::vector<std::vector<double>>& design,
                                const std::vector<double>& y,
                                std::size_t target_col) {
    const std::size_t n = design.size();
    const std::size_t p = design[0].size();
    std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += design[i][a] * y[i];
            for (std::size_t b = 0; b < p; ++b) {
                xtx[a][b] += design[i][a] * design[i][b];
            }
        }
    }
    auto coef = gauss_solve(xtx, xty);

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t a = 0; a < p; ++a) fit += design[i][a] * coef[a];
        sse += (y[i] - fit) * (y[i] - fit);
    }
    double sigma2 = sse / static_cast<double>(n - p);

    // (X'X)^{-1} column for the target via unit right-hand side.
    std::vector<double> unit(p, 0.0);
    unit[target_col] = 1.0;
    auto inv_col = gauss_solve(xtx, unit);

    BruteFit fit;
    fit.estimate = coef[target_col];
    fit.std_error = std::sqrt(sigma2 * inv_col[target_col]);
    fit.t_stat = fit.estimate / fit.std_error;
    return fit;
}

// Small random dataset with continuous columns; no exact collinearity.
inline csmt::Dataset random_dataset(std::size_t n, std::size_t q,
                                    csmt::Rng& rng) {
    csmt::Dataset ds;
    auto rows = static_cast<Eigen::Index>(n);
    ds.s.resize(rows);
    ds.g.resize(rows);
    ds.y.resize(rows);
    ds.x.resize(rows, static_cast<Eigen::Index>(q));
    for (Eigen::Index i = 0; i < rows; ++i) {
        ds.s(i) = rng.normal();
        ds.g(i) = rng.normal();
        ds.y(i) = rng.normal();
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(q); ++c) {
            ds.x(i, c) = rng.normal();
        }
    }
    return ds;
}

} // namespace testing_support
