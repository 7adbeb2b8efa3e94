#pragma once

#include "csmt/dataset.hpp"

#include <cstddef>

namespace csmt {

enum class FitTarget { alpha, beta };

// One structural-equation coefficient with its classical (homoscedastic)
// standard error. t_stat == estimate / std_error identically, which
// matches the sqrt(n)-scaled t-statistic convention.
struct RegressionFit {
    double estimate = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    std::size_t df_residual = 0;
    FitTarget target = FitTarget::alpha;
};

// OLS of G on (intercept, S, covariates); returns the S coefficient.
RegressionFit fit_alpha(const Dataset& ds);

// OLS of Y on (intercept, G, S, covariates); returns the G coefficient.
RegressionFit fit_beta(const Dataset& ds);

} // namespace csmt
