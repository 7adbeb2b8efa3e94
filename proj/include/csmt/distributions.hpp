#pragma once

namespace csmt {

// CDFs and quantiles for the three laws the tests reference: normal,
// Student-t and standard Cauchy. Non-finite inputs throw
// std::invalid_argument; out-of-range parameters likewise.

double normal_cdf(double x);

// Student-t CDF with df >= 1 degrees of freedom, evaluated through the
// regularized incomplete beta function. df = 1 coincides with the Cauchy
// CDF.
double student_t_cdf(double x, int df);

// Inverse of student_t_cdf in p, 0 < p < 1. Round-trips through the CDF
// to better than 1e-10.
double student_t_quantile(double p, int df);

double cauchy_sf(double x);
double cauchy_quantile(double p);

// Clamp a probability to [1e-15, 1 - 1e-15] before tan/log transforms.
double clamp_probability(double p);

// Regularized incomplete beta function I_x(a, b), x in [0, 1].
double incomplete_beta(double a, double b, double x);

} // namespace csmt
