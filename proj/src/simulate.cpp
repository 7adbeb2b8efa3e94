#include "csmt/simulate.hpp"

#include "csmt/distributions.hpp"
#include "csmt/errors.hpp"
#include "csmt/regress.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <functional>
#include <thread>

namespace csmt {

void NullMixture::validate() const {
    for (double pi : {pi_00, pi_01, pi_10, pi_11}) {
        if (!(pi >= 0.0 && pi <= 1.0)) {
            throw config_error("NullMixture: proportions must lie in [0, 1]");
        }
    }
    double total = pi_00 + pi_01 + pi_10 + pi_11;
    if (std::fabs(total - 1.0) > 1e-12) {
        throw config_error("NullMixture: proportions must sum to 1");
    }
    if (!std::isfinite(r)) {
        throw config_error("NullMixture: r must be finite");
    }
}

double ExperimentReport::neglog10_level() const {
    return -std::log10(settings.level);
}

double ExperimentReport::rejection_rate(Method m, std::size_t grid_index) const {
    const auto& series = grid.at(grid_index).series;
    for (const auto& s : series) {
        if (s.method == m) return s.rejection_rate;
    }
    throw std::out_of_range("rejection_rate: method not in report");
}

Dataset generate_dataset(const SimulationParams& params, const RandomSource& src) {
    if (params.n < 16) {
        throw insufficient_data_error("generate_dataset: n must be >= 16");
    }
    Rng rng(src);
    auto n = static_cast<Eigen::Index>(params.n);
    Dataset ds;
    ds.s.resize(n);
    ds.g.resize(n);
    ds.y.resize(n);
    ds.x.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = rng.uniform() < 0.5 ? 0.0 : 1.0;
        double x1 = rng.uniform();
        double x2 = rng.uniform();
        double eps = params.noise_free ? 0.0 : rng.normal();
        double e = params.noise_free ? 0.0 : rng.normal();
        double g = params.alpha * s + params.alpha0 + params.alpha1 * x1 +
                   params.alpha2 * x2 + eps;
        double y = params.beta * g + params.beta0 + params.beta1 * x1 +
                   params.beta2 * x2 + params.tau_direct * s + e;
        ds.s(i) = s;
        ds.x(i, 0) = x1;
        ds.x(i, 1) = x2;
        ds.g(i) = g;
        ds.y(i) = y;
    }
    return ds;
}

std::vector<std::size_t> mixture_counts(const NullMixture& mix, std::size_t n_tests) {
    mix.validate();
    const double props[4] = {mix.pi_00, mix.pi_01, mix.pi_10, mix.pi_11};
    std::vector<std::size_t> counts(4);
    double remainders[4];
    std::size_t assigned = 0;
    for (int i = 0; i < 4; ++i) {
        double exact = props[i] * static_cast<double>(n_tests);
        counts[static_cast<std::size_t>(i)] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = exact - std::floor(exact);
        assigned += counts[static_cast<std::size_t>(i)];
    }
    while (assigned < n_tests) {
        int best = 0;
        for (int i = 1; i < 4; ++i) {
            if (remainders[i] > remainders[best]) best = i;
        }
        ++counts[static_cast<std::size_t>(best)];
        remainders[best] = -1.0;
        ++assigned;
    }
    return counts;
}

std::pair<double, double> solve_signal_pair(double ratio, double product) {
    if (!(ratio > 0.0) || !(product > 0.0)) {
        throw config_error("solve_signal_pair: ratio and product must be positive");
    }
    double beta = std::sqrt(product / ratio);
    return {ratio * beta, beta};
}

namespace {

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::pair<double, double>> qq_pairs(std::vector<double> p_values) {
    std::sort(p_values.begin(), p_values.end());
    const auto n = p_values.size();
    std::vector<std::pair<double, double>> qq;
    qq.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        qq.emplace_back(u, -std::log10(clamp_probability(p_values[i])));
    }
    return qq;
}

// Run the requested methods on one dataset; p-values indexed like
// settings.methods.
std::vector<double> run_methods_once(const Dataset& ds,
                                     const ExperimentSettings& settings,
                                     std::size_t k_used,
                                     const RandomSource& test_src) {
    std::vector<double> p(settings.methods.size());
    for (std::size_t j = 0; j < settings.methods.size(); ++j) {
        switch (settings.methods[j]) {
            case Method::sobel:
                p[j] = sobel_test(ds).p_value;
                break;
            case Method::maxp:
                p[j] = maxp_test(ds).p_value;
                break;
            case Method::subsampling_t:
                p[j] = subsampling_t_test(ds, k_used, test_src.with(2)).p_value;
                break;
            case Method::csmt:
                p[j] = csmt(ds, k_used, settings.m_splits, test_src.with(1)).p_value;
                break;
        }
    }
    return p;
}

std::vector<MethodSeries> collect_series(
    const std::vector<Method>& methods,
    const std::vector<std::vector<double>>& p_by_test, double level) {
    std::vector<MethodSeries> series(methods.size());
    for (std::size_t j = 0; j < methods.size(); ++j) {
        auto& s = series[j];
        s.method = methods[j];
        s.p_values.reserve(p_by_test.size());
        std::size_t rejected = 0;
        for (const auto& row : p_by_test) {
            s.p_values.push_back(row[j]);
            if (row[j] <= level) ++rejected;
        }
        s.rejection_rate =
            static_cast<double>(rejected) / static_cast<double>(p_by_test.size());
        s.qq = qq_pairs(s.p_values);
    }
    return series;
}

} // namespace

ExperimentReport run_size_experiment(const NullMixture& mix,
                                     const ExperimentSettings& settings,
                                     const RandomSource& src) {
    mix.validate();
    if (mix.pi_11 > 0.0) {
        throw config_error(
            "run_size_experiment: pi_11 must be 0 in a size experiment");
    }
    if (settings.n_tests < 1) {
        throw config_error("run_size_experiment: n_tests must be >= 1");
    }
    const std::size_t k_used = settings.k > 0 ? settings.k : choose_k(settings.n);
    const auto counts = mixture_counts(mix, settings.n_tests);

    // Null type per test index: H00 block, then H01, then H10.
    std::vector<std::pair<double, double>> signal(settings.n_tests);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < counts[0]; ++i) signal[idx++] = {0.0, 0.0};
    for (std::size_t i = 0; i < counts[1]; ++i) signal[idx++] = {0.0, mix.r};
    for (std::size_t i = 0; i < counts[2]; ++i) signal[idx++] = {mix.r, 0.0};

    std::vector<std::vector<double>> p_by_test(settings.n_tests);
    parallel_for(settings.n_tests, settings.threads, [&](std::size_t t) {
        SimulationParams params;
        params.alpha = signal[t].first;
        params.beta = signal[t].second;
        params.n = settings.n;
        RandomSource test_src = src.with(t);
        Dataset ds = generate_dataset(params, test_src.with(0));
        try {
            p_by_test[t] = run_methods_once(ds, settings, k_used, test_src);
        } catch (const std::exception& ex) {
            throw numeric_error("size experiment failed at test " +
                                std::to_string(t) + ": " + ex.what());
        }
    });

    ExperimentReport report;
    report.mode = "size";
    report.settings = settings;
    report.master_seed = src.master_seed;
    report.k_used = k_used;
    report.mixture = mix;
    report.count_h00 = counts[0];
    report.count_h01 = counts[1];
    report.count_h10 = counts[2];
    report.count_h11 = counts[3];
    ExperimentReport::GridResult point;
    point.grid_value = mix.r;
    point.series = collect_series(settings.methods, p_by_test, settings.level);
    report.grid.push_back(std::move(point));
    return report;
}

ExperimentReport run_power_experiment(const PowerGrid& grid,
                                      const ExperimentSettings& settings,
                                      const RandomSource& src) {
    if (grid.values.empty()) {
        throw config_error("run_power_experiment: empty grid");
    }
    double product = grid.product;
    if (grid.scenario == PowerScenario::fixed_product && product <= 0.0) {
        // Paper pairing of product with sample size.
        switch (settings.n) {
            case 100: product = 0.3; break;
            case 200: product = 0.2; break;
            case 300: product = 0.1; break;
            default:
                throw config_error(
                    "run_power_experiment: no default product for n = " +
                    std::to_string(settings.n) + "; set one explicitly");
        }
    }
    const std::size_t k_used = settings.k > 0 ? settings.k : choose_k(settings.n);

    ExperimentReport report;
    report.mode = "power";
    report.settings = settings;
    report.master_seed = src.master_seed;
    report.k_used = k_used;
    report.grid_spec = grid;
    report.grid_spec.product =
        grid.scenario == PowerScenario::fixed_product ? product : 0.0;

    for (std::size_t gi = 0; gi < grid.values.size(); ++gi) {
        double value = grid.values[gi];
        double alpha, beta;
        if (grid.scenario == PowerScenario::fixed_equal) {
            if (!std::isfinite(value)) {
                throw config_error("run_power_experiment: non-finite grid value");
            }
            alpha = beta = value;
        } else {
            std::tie(alpha, beta) = solve_signal_pair(value, product);
        }

        std::vector<std::vector<double>> p_by_test(settings.n_tests);
        RandomSource point_src = src.with(gi);
        parallel_for(settings.n_tests, settings.threads, [&](std::size_t t) {
            SimulationParams params;
            params.alpha = alpha;
            params.beta = beta;
            params.n = settings.n;
            RandomSource test_src = point_src.with(t);
            Dataset ds = generate_dataset(params, test_src.with(0));
            try {
                p_by_test[t] = run_methods_once(ds, settings, k_used, test_src);
            } catch (const std::exception& ex) {
                throw numeric_error("power experiment failed at test " +
                                    std::to_string(t) + ": " + ex.what());
            }
        });

        ExperimentReport::GridResult point;
        point.grid_value = value;
        point.alpha = alpha;
        point.beta = beta;
        point.series = collect_series(settings.methods, p_by_test, settings.level);
        report.grid.push_back(std::move(point));
    }
    return report;
}

} // namespace csmt
