#include "csmt/medtests.hpp"

#include "csmt/distributions.hpp"
#include "csmt/errors.hpp"
#include "csmt/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace csmt {

std::string method_name(Method m) {
    switch (m) {
        case Method::sobel: return "sobel";
        case Method::maxp: return "maxp";
        case Method::subsampling_t: return "subsampling_t";
        case Method::csmt: return "csmt";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "sobel") return Method::sobel;
    if (name == "maxp") return Method::maxp;
    if (name == "subsampling_t") return Method::subsampling_t;
    if (name == "csmt") return Method::csmt;
    throw config_error("unknown method: " + name);
}

double sobel_statistic(double t_alpha, double t_beta) {
    if (!std::isfinite(t_alpha) || !std::isfinite(t_beta)) {
        throw std::invalid_argument("sobel_statistic: inputs must be finite");
    }
    if (t_alpha == 0.0 && t_beta == 0.0) {
        return 0.0; // continuity limit
    }
    return t_alpha * t_beta / std::sqrt(t_alpha * t_alpha + t_beta * t_beta);
}

TestResult sobel_test(const Dataset& ds) {
    double t_a = fit_alpha(ds).t_stat;
    double t_b = fit_beta(ds).t_stat;
    TestResult result;
    result.method = Method::sobel;
    result.statistic = sobel_statistic(t_a, t_b);
    result.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(result.statistic)));
    return result;
}

TestResult maxp_test(const Dataset& ds) {
    double t_a = fit_alpha(ds).t_stat;
    double t_b = fit_beta(ds).t_stat;
    double p_a = 2.0 * (1.0 - normal_cdf(std::fabs(t_a)));
    double p_b = 2.0 * (1.0 - normal_cdf(std::fabs(t_b)));
    TestResult result;
    result.method = Method::maxp;
    result.statistic = std::max(p_a, p_b);
    result.p_value = result.statistic;
    return result;
}

Partition make_partition(std::size_t n, std::size_t k, Rng& rng) {
    if (k < 2 || k > n / 2) {
        throw std::invalid_argument(
            "make_partition: need 2 <= k <= n / 2, got k = " +
            std::to_string(k) + " for n = " + std::to_string(n));
    }
    std::size_t base = n / k;
    std::size_t leftover = n - k * base;

    // Leftover rows each land in a distinct, randomly chosen group.
    std::vector<std::size_t> sizes(k, base);
    std::vector<std::size_t> group_order = rng.permutation(k);
    for (std::size_t i = 0; i < leftover; ++i) {
        ++sizes[group_order[i]];
    }

    std::vector<std::size_t> rows = rng.permutation(n);
    Partition part;
    part.n = n;
    part.k = k;
    part.groups.resize(k);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < k; ++g) {
        part.groups[g].assign(rows.begin() + static_cast<std::ptrdiff_t>(offset),
                              rows.begin() + static_cast<std::ptrdiff_t>(offset + sizes[g]));
        offset += sizes[g];
    }
    return part;
}

Partition make_partition(std::size_t n, std::size_t k, const RandomSource& src) {
    Rng rng(src);
    return make_partition(n, k, rng);
}

std::size_t choose_k(std::size_t n) {
    if (n < 16) {
        throw insufficient_data_error(
            "choose_k: n >= 16 required so that K = floor(0.5 sqrt(n)) >= 2, got n = " +
            std::to_string(n));
    }
    return static_cast<std::size_t>(0.5 * std::sqrt(static_cast<double>(n)));
}

std::pair<double, double> studentize(const std::vector<double>& split_stats) {
    const std::size_t k = split_stats.size();
    if (k < 2) {
        throw std::invalid_argument("studentize: need at least two split statistics");
    }
    double mean = 0.0;
    for (double v : split_stats) mean += v;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double v : split_stats) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(k - 1));
    // Constant splits can leave sd at rounding noise rather than exactly zero.
    if (sd <= 1e-12 * std::max(1.0, std::fabs(mean))) {
        throw degenerate_statistic_error(
            "studentize: zero sample standard deviation across splits");
    }
    double stat = std::sqrt(static_cast<double>(k)) * mean / sd;
    double p = 2.0 * (1.0 - student_t_cdf(std::fabs(stat), static_cast<int>(k - 1)));
    return {stat, p};
}

namespace {

TestResult subsampling_t_from(const Dataset& ds, const Partition& part) {
    std::vector<double> split_stats;
    split_stats.reserve(part.k);
    for (std::size_t g = 0; g < part.k; ++g) {
        Dataset sub = ds.select_rows(part.groups[g]);
        double t_a, t_b;
        try {
            t_a = fit_alpha(sub).t_stat;
            t_b = fit_beta(sub).t_stat;
        } catch (const insufficient_data_error&) {
            throw insufficient_data_error(
                "subsampling_t_test: subsample " + std::to_string(g + 1) +
                " of size " + std::to_string(part.groups[g].size()) +
                " is too small for the regressions");
        }
        split_stats.push_back(sobel_statistic(t_a, t_b));
    }
    auto [stat, p] = studentize(split_stats);
    TestResult result;
    result.method = Method::subsampling_t;
    result.statistic = stat;
    result.p_value = p;
    result.detail.k = part.k;
    result.detail.split_statistics = split_stats;
    double mean = 0.0;
    for (double v : split_stats) mean += v;
    result.detail.split_mean = mean / static_cast<double>(part.k);
    return result;
}

std::string digest_weights(const std::vector<double>& weights) {
    // FNV-1a over the raw bytes, hex encoded.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double w : weights) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(&w);
        for (std::size_t i = 0; i < sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace

TestResult subsampling_t_test(const Dataset& ds, std::size_t k,
                              const RandomSource& src) {
    ds.validate();
    Rng rng(src);
    return subsampling_t_from(ds, make_partition(ds.n(), k, rng));
}

std::vector<double> generate_weights(std::size_t m, Rng& rng) {
    if (m < 1) {
        throw std::invalid_argument("generate_weights: m must be >= 1");
    }
    std::vector<double> weights(m);
    double total = 0.0;
    for (auto& w : weights) {
        w = rng.uniform();
        total += w;
    }
    if (total <= 0.0) {
        // All-zero uniforms: fall back to equal weights.
        for (auto& w : weights) w = 1.0 / static_cast<double>(m);
        return weights;
    }
    for (auto& w : weights) w /= total;
    return weights;
}

std::vector<double> generate_weights(std::size_t m, const RandomSource& src) {
    Rng rng(src);
    return generate_weights(m, rng);
}

std::pair<double, double> cauchy_combine(const std::vector<double>& p_values,
                                         const std::vector<double>& weights) {
    if (p_values.size() != weights.size()) {
        throw std::invalid_argument(
            "cauchy_combine: p-value and weight lengths differ");
    }
    if (p_values.empty()) {
        throw std::invalid_argument("cauchy_combine: empty input");
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        double p = clamp_probability(p_values[i]);
        stat += weights[i] * std::tan(std::numbers::pi * (0.5 - p));
    }
    return {stat, cauchy_sf(stat)};
}

TestResult csmt(const Dataset& ds, std::size_t k, std::size_t m,
                const RandomSource& src, const CsmtOptions& opts) {
    ds.validate();
    if (m < 1) {
        throw std::invalid_argument("csmt: m must be >= 1");
    }
    std::vector<double> split_p(m);
    TestDetail last_detail;
    for (std::size_t split = 1; split <= m; ++split) {
        Rng rng(src.with(split));
        TestResult split_result;
        try {
            split_result = subsampling_t_from(ds, make_partition(ds.n(), k, rng));
        } catch (const numeric_error&) {
            // One re-randomized retry; a second failure aborts.
            split_result = subsampling_t_from(ds, make_partition(ds.n(), k, rng));
        }
        split_p[split - 1] = split_result.p_value;
        last_detail = split_result.detail;
    }

    std::vector<double> weights;
    if (opts.equal_weights) {
        weights.assign(m, 1.0 / static_cast<double>(m));
    } else {
        Rng wrng(src.with(m + 1));
        weights = generate_weights(m, wrng);
    }
    auto [stat, p] = cauchy_combine(split_p, weights);
    if (m == 1) {
        p = split_p[0]; // combination is the identity on one input
    }

    TestResult result;
    result.method = Method::csmt;
    result.statistic = stat;
    result.p_value = p;
    result.detail.k = k;
    result.detail.m_splits = m;
    result.detail.split_p_values = std::move(split_p);
    result.detail.split_statistics = last_detail.split_statistics;
    result.detail.split_mean = last_detail.split_mean;
    result.detail.weights_digest = digest_weights(weights);
    return result;
}

} // namespace csmt
