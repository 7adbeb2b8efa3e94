#include "csmt/calibrate.hpp"

#include "csmt/distributions.hpp"
#include "csmt/medtests.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csmt {

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

double ks_p_value(double d, std::size_t n) {
    // Kolmogorov tail sum with the finite-n argument adjustment.
    double sqrt_n = std::sqrt(static_cast<double>(n));
    double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    double p = 2.0 * sum;
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> product_limit_draws(std::size_t count, const RandomSource& src) {
    Rng rng(src);
    std::vector<double> out(count);
    for (auto& w : out) {
        double z1 = rng.normal();
        double z2 = rng.normal();
        w = sobel_statistic(z1, z2);
    }
    return out;
}

std::vector<double> studentized_null_draws(std::size_t k, double variance,
                                           std::size_t count,
                                           const RandomSource& src) {
    if (k < 2) {
        throw std::invalid_argument("studentized_null_draws: k must be >= 2");
    }
    if (!(variance > 0.0)) {
        throw std::invalid_argument("studentized_null_draws: variance must be positive");
    }
    Rng rng(src);
    double sd = std::sqrt(variance);
    std::vector<double> values(k);
    std::vector<double> out(count);
    for (auto& t : out) {
        for (auto& v : values) v = sd * rng.normal();
        t = studentize(values).first;
    }
    return out;
}

std::vector<KsResult> run_calibration(std::size_t draws, std::size_t k,
                                      const RandomSource& src) {
    std::vector<KsResult> results;

    auto w = product_limit_draws(draws, src.with(0));
    KsResult r1;
    r1.name = "sobel_limit_vs_normal_sd_half";
    r1.statistic = ks_statistic(w, [](double x) { return normal_cdf(2.0 * x); });
    r1.p_value = ks_p_value(r1.statistic, draws);
    results.push_back(r1);

    int df = static_cast<int>(k) - 1;
    const double variances[2] = {0.25, 1.0};
    const char* names[2] = {"studentized_vs_t_var_quarter", "studentized_vs_t_var_one"};
    for (int i = 0; i < 2; ++i) {
        auto t = studentized_null_draws(k, variances[i], draws,
                                        src.with(static_cast<std::uint64_t>(i + 1)));
        KsResult r;
        r.name = names[i];
        r.statistic = ks_statistic(t, [df](double x) { return student_t_cdf(x, df); });
        r.p_value = ks_p_value(r.statistic, draws);
        results.push_back(r);
    }
    return results;
}

} // namespace csmt
