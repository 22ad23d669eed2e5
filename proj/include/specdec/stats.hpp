#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specdec/errors.hpp"

namespace specdec {

/// Ordinary least-squares fit of tps = a + b * alpha.
struct OlsFit {
    double a = 0;         // intercept: throughput floor at alpha = 0
    double b = 0;         // slope: recovery rate per unit acceptance
    double se_a = 0;
    double se_b = 0;
    double cov_ab = 0;
    double r_squared = 0;
    std::size_t n = 0;
};

/// Closed-form normal-equation fit. Needs n >= 2 with at least two distinct
/// alpha values; standard errors use the unbiased residual variance and are
/// zero for n == 2 (an interpolating line has no residual).
OlsFit ols_fit(const std::vector<std::pair<double, double>>& points);

struct BreakevenEstimate {
    double alpha = 0;
    bool defined = false;   // false when the slope is not positive
    bool reachable = false; // false when alpha > 1
};

/// alpha_be = (tps_base - a) / b. A non-positive slope cannot pay back the
/// overhead, so the estimate is flagged undefined rather than thrown.
BreakevenEstimate breakeven_from_fit(const OlsFit& fit, double tps_base);

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Delta-method confidence interval for the fitted break-even: with
/// f = (T - a)/b and gradient (-1/b, -(T-a)/b^2),
/// Var(f) = se_a^2/b^2 + (T-a)^2 se_b^2/b^4 + 2(T-a) cov_ab/b^3.
Interval delta_ci(const OlsFit& fit, double tps_base, double level = 0.95);

/// Standard-normal quantile (Acklam's rational approximation, |err| < 1.2e-9).
double normal_quantile(double p);

struct BucketRow {
    std::string label;
    double lo = 0; // inclusive, as a fraction
    double hi = 0; // exclusive (inclusive for the top bucket)
    double mean_speedup = 0;
    std::size_t n = 0;
};

/// Mean speedup by acceptance-rate bucket: everything below 30% collapsed
/// into one bucket, then bucket_width_pp-wide bands up to 70%, then a single
/// top bucket. Edges are left-closed, right-open.
std::vector<BucketRow> bucket_table(const std::vector<std::pair<double, double>>& alpha_speedup,
                                    double bucket_width_pp = 10.0);

struct SummaryRow {
    std::string dataset;
    std::string drafter;
    std::string strategy;
    int k = 0;
    double mean_alpha = 0;
    double mean_tps = 0;
    double mean_speedup = 0;
    std::size_t n = 0;
    bool at_or_above_baseline = false; // mean speedup >= 1.00
};

} // namespace specdec
