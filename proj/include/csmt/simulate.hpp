#pragma once

#include "csmt/dataset.hpp"
#include "csmt/medtests.hpp"
#include "csmt/random.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace csmt {

// Coefficients of the two structural equations:
//   G = alpha S + alpha0 + alpha1 X1 + alpha2 X2 + eps
//   Y = beta G + beta0 + beta1 X1 + beta2 X2 + tau_direct S + e
// with X1, X2 ~ U(0,1), eps, e ~ N(0,1) and S ~ Bernoulli(1/2).
struct SimulationParams {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha0 = 0.5;
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double beta0 = 0.5;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double tau_direct = 0.0;
    std::size_t n = 600;
    bool noise_free = false; // test mode: eps = e = 0
};

// Null-type proportions and the signal magnitude r used for the nonzero
// coefficient under H01 / H10.
struct NullMixture {
    double pi_00 = 1.0;
    double pi_01 = 0.0;
    double pi_10 = 0.0;
    double pi_11 = 0.0;
    double r = 0.1;

    void validate() const;
};

struct ExperimentSettings {
    std::size_t n = 600;
    std::size_t n_tests = 500;
    std::vector<Method> methods = {Method::csmt, Method::sobel, Method::maxp};
    double level = 0.05;
    std::size_t m_splits = 500;
    std::size_t k = 0;       // 0 = choose_k(n)
    std::size_t threads = 0; // 0 = hardware concurrency
};

enum class PowerScenario { fixed_equal, fixed_product };

struct PowerGrid {
    PowerScenario scenario = PowerScenario::fixed_equal;
    std::vector<double> values; // common signal values, or ratios alpha/beta
    double product = 0.0;       // fixed_product only; 0 = paper pairing by n
};

struct MethodSeries {
    Method method = Method::sobel;
    std::vector<double> p_values;
    double rejection_rate = 0.0;
    // Pairs (uniform quantile, -log10 p), uniform quantile ascending.
    std::vector<std::pair<double, double>> qq;
};

struct ExperimentReport {
    std::string mode; // "size" or "power"
    ExperimentSettings settings;
    std::uint64_t master_seed = 0;
    std::size_t k_used = 0;
    std::string exposure_note = "S ~ Bernoulli(1/2)";

    // size mode
    NullMixture mixture;
    std::size_t count_h00 = 0, count_h01 = 0, count_h10 = 0, count_h11 = 0;

    // power mode
    PowerGrid grid_spec;

    struct GridResult {
        double grid_value = 0.0;
        double alpha = 0.0;
        double beta = 0.0;
        std::vector<MethodSeries> series;
    };
    std::vector<GridResult> grid; // size mode holds a single entry

    double neglog10_level() const;

    double rejection_rate(Method m, std::size_t grid_index = 0) const;
};

Dataset generate_dataset(const SimulationParams& params, const RandomSource& src);

// Largest-remainder apportionment of n_tests across the four null types.
// Returned in order (H00, H01, H10, H11).
std::vector<std::size_t> mixture_counts(const NullMixture& mix, std::size_t n_tests);

// Solve alpha beta = product, alpha / beta = ratio for positive roots.
std::pair<double, double> solve_signal_pair(double ratio, double product);

ExperimentReport run_size_experiment(const NullMixture& mix,
                                     const ExperimentSettings& settings,
                                     const RandomSource& src);

ExperimentReport run_power_experiment(const PowerGrid& grid,
                                      const ExperimentSettings& settings,
                                      const RandomSource& src);

} // namespace csmt
