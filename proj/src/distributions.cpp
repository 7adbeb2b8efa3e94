#include "csmt/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csmt {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + ": input must be finite");
    }
}

// Continued fraction for the incomplete beta function (Lentz's method).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete_beta: a and b must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b)
                      + a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) {
    require_finite(x, "normal_cdf");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double student_t_cdf(double x, int df) {
    require_finite(x, "student_t_cdf");
    if (df < 1) {
        throw std::invalid_argument("student_t_cdf: df must be >= 1");
    }
    if (x == 0.0) return 0.5;
    double nu = static_cast<double>(df);
    double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / (nu + x * x));
    return x > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, int df) {
    require_finite(p, "student_t_quantile");
    if (df < 1) {
        throw std::invalid_argument("student_t_quantile: df must be >= 1");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("student_t_quantile: p must lie in (0, 1)");
    }
    if (p == 0.5) return 0.0;
    // Solve for the upper-half quantile and reflect.
    double q = p > 0.5 ? p : 1.0 - p;
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_cdf(hi, df) < q) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (student_t_cdf(mid, df) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double t = 0.5 * (lo + hi);
    return p > 0.5 ? t : -t;
}

double cauchy_sf(double x) {
    require_finite(x, "cauchy_sf");
    return 0.5 - std::atan(x) / std::numbers::pi;
}

double cauchy_quantile(double p) {
    require_finite(p, "cauchy_quantile");
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("cauchy_quantile: p must lie in (0, 1)");
    }
    return std::tan(std::numbers::pi * (p - 0.5));
}

double clamp_probability(double p) {
    constexpr double kLo = 1e-15;
    constexpr double kHi = 1.0 - 1e-15;
    if (p < kLo) return kLo;
    if (p > kHi) return kHi;
    return p;
}

} // namespace csmt
