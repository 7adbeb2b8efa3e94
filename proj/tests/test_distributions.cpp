#include "csmt/distributions.hpp"
#include "csmt/random.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

using namespace csmt;

TEST_CASE("normal_cdf reference values") {
    CHECK(normal_cdf(0.0) == 0.5);
    // High-precision erf oracle: Phi(1.959964) = 0.97500000090...
    CHECK(normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
    CHECK(normal_cdf(-1.959964) == doctest::Approx(0.025).epsilon(1e-6));
    CHECK_THROWS_AS(normal_cdf(std::nan("")), std::invalid_argument);
}

TEST_CASE("normal_cdf symmetry and monotonicity on a grid") {
    double prev = -1.0;
    for (double x = -8.0; x <= 8.0; x += 0.25) {
        double f = normal_cdf(x);
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(f + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-12));
        prev = f;
    }
}

TEST_CASE("student_t_cdf reference values") {
    // df=1 is the Cauchy law: 1/2 + arctan(1)/pi = 3/4.
    CHECK(student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
    // Closed form for df=2: 1/2 + t / (2 sqrt(2 + t^2)), t^2 = 12.
    CHECK(student_t_cdf(3.4641, 2) == doctest::Approx(0.96291001905313424).epsilon(1e-4));
    CHECK(student_t_cdf(0.0, 7) == 0.5);
    CHECK(student_t_cdf(0.0, 1) == 0.5);
    CHECK_THROWS_AS(student_t_cdf(1.0, 0), std::invalid_argument);
}

TEST_CASE("student_t_cdf matches Cauchy at df=1 and normal at huge df") {
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        CHECK(student_t_cdf(x, 1) == doctest::Approx(1.0 - cauchy_sf(x)).epsilon(1e-12));
        CHECK(student_t_cdf(x, 1000000) == doctest::Approx(normal_cdf(x)).epsilon(1e-6));
    }
}

TEST_CASE("student_t symmetry on a grid") {
    for (int df : {1, 2, 5, 11, 30}) {
        for (double x = 0.25; x <= 6.0; x += 0.5) {
            CHECK(student_t_cdf(-x, df) ==
                  doctest::Approx(1.0 - student_t_cdf(x, df)).epsilon(1e-12));
        }
    }
}

TEST_CASE("student_t_quantile reference values") {
    CHECK(student_t_quantile(0.5, 7) == 0.0);
    CHECK(student_t_quantile(0.975, 11) == doctest::Approx(2.2010).epsilon(5e-4));
    CHECK(student_t_quantile(0.75, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(student_t_quantile(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(student_t_quantile(1.0, 5), std::invalid_argument);
}

TEST_CASE("quantile / cdf round trips") {
    for (int df : {1, 2, 4, 11, 40}) {
        for (double p : {1e-6, 1e-3, 0.025, 0.2, 0.5, 0.8, 0.975, 1.0 - 1e-3,
                         1.0 - 1e-6}) {
            double t = student_t_quantile(p, df);
            CHECK(student_t_cdf(t, df) == doctest::Approx(p).epsilon(1e-8));
        }
    }
    for (double p : {1e-6, 0.05, 0.5, 0.95, 1.0 - 1e-6}) {
        double x = cauchy_quantile(p);
        CHECK(1.0 - cauchy_sf(x) == doctest::Approx(p).epsilon(1e-8));
    }
}

TEST_CASE("cauchy reference values") {
    CHECK(cauchy_sf(0.0) == 0.5);
    CHECK(cauchy_sf(1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(cauchy_quantile(0.95) == doctest::Approx(6.3138).epsilon(1e-3));
    CHECK_THROWS_AS(cauchy_quantile(1.5), std::invalid_argument);
}

TEST_CASE("clamp_probability bounds") {
    CHECK(clamp_probability(0.0) == 1e-15);
    CHECK(clamp_probability(1.0) == 1.0 - 1e-15);
    CHECK(clamp_probability(0.3) == 0.3);
}

TEST_CASE("rng determinism and substream independence") {
    RandomSource src(42);
    Rng a(src.with(7));
    Rng b(src.with(7));
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng c(src.with(8));
    bool any_diff = false;
    Rng a2(src.with(7));
    for (int i = 0; i < 10; ++i) {
        any_diff = any_diff || (a2.next_u64() != c.next_u64());
    }
    CHECK(any_diff);
}

TEST_CASE("permutation of n=1 is the identity") {
    Rng rng(RandomSource(1).with(0));
    auto perm = rng.permutation(1);
    REQUIRE(perm.size() == 1);
    CHECK(perm[0] == 0);
}

TEST_CASE("permutations are valid and seed-stable") {
    Rng rng(RandomSource(9).with(3));
    auto perm = rng.permutation(100);
    std::set<std::size_t> seen(perm.begin(), perm.end());
    CHECK(seen.size() == 100);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 99);

    Rng again(RandomSource(9).with(3));
    CHECK(again.permutation(100) == perm);
}

TEST_CASE("uniform and normal moments (CLT bounds)") {
    Rng rng(RandomSource(2024));
    const int n = 1000000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean += u;
    }
    mean /= n;
    CHECK(std::fabs(mean - 0.5) < 0.002);

    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    double var = sum_sq / n - (sum / n) * (sum / n);
    CHECK(std::fabs(var - 1.0) < 0.01);
}
