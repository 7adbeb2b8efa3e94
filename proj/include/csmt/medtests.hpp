#pragma once

#include "csmt/dataset.hpp"
#include "csmt/random.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace csmt {

enum class Method { sobel, maxp, subsampling_t, csmt };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Disjoint cover of {0..n-1} into k groups whose sizes differ by at most
// one.
struct Partition {
    std::vector<std::vector<std::size_t>> groups;
    std::size_t n = 0;
    std::size_t k = 0;
};

struct TestDetail {
    std::size_t k = 0;        // subsample count (subsampling_t, csmt)
    std::size_t m_splits = 0; // repeated-split count (csmt)
    std::vector<double> split_statistics; // per-subsample Sobel values
    double split_mean = 0.0;
    std::vector<double> split_p_values;   // per-split p-values (csmt)
    std::string weights_digest;           // hash of the combination weights
};

struct TestResult {
    Method method = Method::sobel;
    double statistic = 0.0;
    double p_value = 1.0;
    TestDetail detail;
};

// Sobel statistic from the two marginal t-statistics:
// t_a * t_b / sqrt(t_a^2 + t_b^2), with the value at (0, 0) taken as 0 by
// continuity.
double sobel_statistic(double t_alpha, double t_beta);

// Classical Sobel test with a two-sided normal-reference p-value.
TestResult sobel_test(const Dataset& ds);

// Joint-significance rule: p = max of the two-sided normal-reference
// marginal p-values.
TestResult maxp_test(const Dataset& ds);

// Random equal-as-possible partition; leftover rows go to distinct,
// randomly chosen groups. Requires 2 <= k <= n / 2.
Partition make_partition(std::size_t n, std::size_t k, const RandomSource& src);
Partition make_partition(std::size_t n, std::size_t k, Rng& rng);

// Subsample-count rule floor(0.5 * sqrt(n)); requires n >= 16 so K >= 2.
std::size_t choose_k(std::size_t n);

// One-sample t-statistic of per-split values with the K-1 divisor, and
// its two-sided t_{K-1} p-value.
std::pair<double, double> studentize(const std::vector<double>& split_stats);

// Single random split: per-subsample Sobel statistics studentized against
// t_{K-1}.
TestResult subsampling_t_test(const Dataset& ds, std::size_t k,
                              const RandomSource& src);

// Nonnegative weights u_i / sum(u) from i.i.d. U(0,1) draws; sums to 1.
std::vector<double> generate_weights(std::size_t m, const RandomSource& src);
std::vector<double> generate_weights(std::size_t m, Rng& rng);

// Weighted Cauchy combination: C = sum w_i tan(pi (0.5 - p_i)), combined
// p-value 0.5 - arctan(C) / pi.
std::pair<double, double> cauchy_combine(const std::vector<double>& p_values,
                                         const std::vector<double>& weights);

struct CsmtOptions {
    bool equal_weights = false; // ablation mode: w_m = 1/M instead of random
};

// Full pipeline: m random splits, per-split subsampling t-test p-values,
// Cauchy combination with random weights. Split i uses substream key i
// (1-based); the weights use key m + 1.
TestResult csmt(const Dataset& ds, std::size_t k, std::size_t m,
                const RandomSource& src, const CsmtOptions& opts = {});

// Null-case labels and the matching asymptotic variance of the Sobel
// statistic; consumed only by distributional oracles.
enum class NullType { H00, H01, H10 };

struct AsymptoticNull {
    NullType null_type = NullType::H00;
    double variance_factor = 0.25; // 1/4 under H00, 1 otherwise

    static AsymptoticNull of(NullType t) {
        return {t, t == NullType::H00 ? 0.25 : 1.0};
    }
};

} // namespace csmt
