#include "specdec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace specdec {

OlsFit ols_fit(const std::vector<std::pair<double, double>>& points) {
    const std::size_t n = points.size();
    if (n < 2) throw DataError("ols_fit needs at least two points");

    double mean_x = 0, mean_y = 0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if (sxx == 0.0) throw DataError("ols_fit is rank-deficient: all alpha values are equal");

    OlsFit fit;
    fit.n = n;
    fit.b = sxy / sxx;
    fit.a = mean_y - fit.b * mean_x;

    double ss_res = 0;
    for (const auto& [x, y] : points) {
        const double r = y - (fit.a + fit.b * x);
        ss_res += r * r;
    }
    if (n > 2) {
        const double sigma2 = ss_res / static_cast<double>(n - 2);
        fit.se_b = std::sqrt(sigma2 / sxx);
        fit.se_a = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + mean_x * mean_x / sxx));
        fit.cov_ab = -sigma2 * mean_x / sxx;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    return fit;
}

BreakevenEstimate breakeven_from_fit(const OlsFit& fit, double tps_base) {
    BreakevenEstimate est;
    if (fit.b <= 0.0) return est;
    est.defined = true;
    est.alpha = (tps_base - fit.a) / fit.b;
    est.reachable = est.alpha <= 1.0;
    return est;
}

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw DomainError("normal quantile needs p in (0, 1)");
    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

Interval delta_ci(const OlsFit& fit, double tps_base, double level) {
    BreakevenEstimate est = breakeven_from_fit(fit, tps_base);
    if (!est.defined) throw DomainError("delta_ci needs a positive fitted slope");
    if (level <= 0.0 || level >= 1.0) throw DomainError("confidence level must lie in (0, 1)");

    const double excess = tps_base - fit.a;
    const double b = fit.b;
    const double var = fit.se_a * fit.se_a / (b * b) +
                       excess * excess * fit.se_b * fit.se_b / (b * b * b * b) +
                       2.0 * excess * fit.cov_ab / (b * b * b);
    const double z = normal_quantile(0.5 + level / 2.0);
    const double half = z * std::sqrt(std::max(var, 0.0));
    return {est.alpha - half, est.alpha + half};
}

std::vector<BucketRow> bucket_table(const std::vector<std::pair<double, double>>& alpha_speedup,
                                    double bucket_width_pp) {
    if (bucket_width_pp <= 0.0) throw DomainError("bucket width must be positive");
    const double w = bucket_width_pp / 100.0;

    std::vector<BucketRow> rows;
    {
        BucketRow low;
        low.label = "<30%";
        low.lo = 0.0;
        low.hi = 0.30;
        rows.push_back(low);
    }
    for (double lo = 0.30; lo < 0.70 - 1e-12; lo += w) {
        BucketRow row;
        const double hi = std::min(lo + w, 0.70);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f-%.0f%%", lo * 100.0, hi * 100.0);
        row.label = buf;
        row.lo = lo;
        row.hi = hi;
        rows.push_back(row);
    }
    {
        BucketRow top;
        top.label = ">=70%";
        top.lo = 0.70;
        top.hi = 1.0;
        rows.push_back(top);
    }

    std::vector<double> sums(rows.size(), 0.0);
    for (const auto& [alpha, speedup] : alpha_speedup) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const bool last = i + 1 == rows.size();
            if (alpha >= rows[i].lo && (alpha < rows[i].hi || (last && alpha <= rows[i].hi))) {
                sums[i] += speedup;
                ++rows[i].n;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].n > 0) rows[i].mean_speedup = sums[i] / static_cast<double>(rows[i].n);
    }
    return rows;
}

} // namespace specdec
