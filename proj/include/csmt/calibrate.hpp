#pragma once

#include "csmt/random.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace csmt {

// One-sample Kolmogorov-Smirnov machinery plus the Monte Carlo
// distributional oracles behind the two limit theorems. Used by the
// calibrate CLI verb and the verification suites; not part of the
// testing API proper.

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov p-value for statistic d at sample size n.
double ks_p_value(double d, std::size_t n);

struct KsResult {
    std::string name;
    double statistic = 0.0;
    double p_value = 0.0;
};

// Draws of Z1 Z2 / sqrt(Z1^2 + Z2^2) with Z1, Z2 i.i.d. standard normal;
// the limiting law of the Sobel statistic when both coefficients vanish.
std::vector<double> product_limit_draws(std::size_t count, const RandomSource& src);

// Draws of the studentized statistic computed from k i.i.d. N(0, variance)
// values; its law is t_{k-1} for any variance.
std::vector<double> studentized_null_draws(std::size_t k, double variance,
                                           std::size_t count,
                                           const RandomSource& src);

// KS checks of both oracles against their limit laws.
std::vector<KsResult> run_calibration(std::size_t draws, std::size_t k,
                                      const RandomSource& src);

} // namespace csmt
