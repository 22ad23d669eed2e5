#include <doctest.h>

#include <cmath>
#include <random>

#include "specdec/stats.hpp"

using namespace specdec;

namespace {

// Independent oracle: raw-moment normal equations solved by Cramer's rule,
// long double accumulation.
OlsFit oracle_fit(const std::vector<std::pair<double, double>>& pts) {
    long double n = static_cast<long double>(pts.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += static_cast<long double>(x) * x;
        sxy += static_cast<long double>(x) * y;
    }
    const long double det = n * sxx - sx * sx;
    OlsFit fit;
    fit.n = pts.size();
    fit.b = static_cast<double>((n * sxy - sx * sy) / det);
    fit.a = static_cast<double>((sy * sxx - sx * sxy) / det);
    long double ss_res = 0, ss_tot = 0;
    const long double mean_y = sy / n;
    for (auto& [x, y] : pts) {
        const long double r = y - (fit.a + fit.b * x);
        ss_res += r * r;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    if (pts.size() > 2) {
        const long double sigma2 = ss_res / (n - 2);
        const long double sxx_c = sxx - sx * sx / n;
        fit.se_b = static_cast<double>(std::sqrt(static_cast<double>(sigma2 / sxx_c)));
        fit.se_a = static_cast<double>(
            std::sqrt(static_cast<double>(sigma2 * (1.0L / n + (sx / n) * (sx / n) / sxx_c))));
        fit.cov_ab = static_cast<double>(-sigma2 * (sx / n) / sxx_c);
    }
    fit.r_squared = ss_tot > 0 ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
    return fit;
}

} // namespace

TEST_CASE("noiseless linear data is recovered exactly") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 10; ++i) {
        const double a = static_cast<double>(i) / 10.0;
        pts.push_back({a, 8.0 + 10.0 * a});
    }
    OlsFit fit = ols_fit(pts);
    CHECK(fit.a == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(fit.b == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric perturbations leave the slope unchanged") {
    // Two clusters at alpha 0.2 and 0.8, each split +/- eps around the line.
    const double eps = 0.5;
    std::vector<std::pair<double, double>> pts = {
        {0.2, 5.0 + eps}, {0.2, 5.0 - eps}, {0.8, 11.0 + eps}, {0.8, 11.0 - eps}};
    OlsFit fit = ols_fit(pts);
    CHECK(fit.b == doctest::Approx((11.0 - 5.0) / 0.6).epsilon(1e-12));
    CHECK(fit.r_squared < 1.0);
    CHECK(fit.r_squared > 0.0);
}

TEST_CASE("two points interpolate with zero residuals") {
    OlsFit fit = ols_fit({{0.1, 3.0}, {0.9, 7.0}});
    CHECK(fit.a + fit.b * 0.1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.a + fit.b * 0.9 == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(fit.se_a == 0.0);
    CHECK(fit.se_b == 0.0);
}

TEST_CASE("degenerate alpha spread is a rank error") {
    CHECK_THROWS_AS(ols_fit({{0.5, 1.0}, {0.5, 2.0}, {0.5, 3.0}}), DataError);
    CHECK_THROWS_AS(ols_fit({{0.5, 1.0}}), DataError);
}

TEST_CASE("ols matches the independent oracle on random data") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.7);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + gen() % 40;
        const double a = 2.0 + 20.0 * unif(gen);
        const double b = -10.0 + 30.0 * unif(gen);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = unif(gen);
            pts.push_back({x, a + b * x + noise(gen)});
        }
        OlsFit fit;
        try {
            fit = ols_fit(pts);
        } catch (const DataError&) {
            continue;
        }
        OlsFit oracle = oracle_fit(pts);
        REQUIRE(std::fabs(fit.a - oracle.a) < 1e-9);
        REQUIRE(std::fabs(fit.b - oracle.b) < 1e-9);
        REQUIRE(std::fabs(fit.se_a - oracle.se_a) < 1e-9);
        REQUIRE(std::fabs(fit.se_b - oracle.se_b) < 1e-9);
        REQUIRE(std::fabs(fit.cov_ab - oracle.cov_ab) < 1e-9);
        REQUIRE(std::fabs(fit.r_squared - oracle.r_squared) < 1e-9);
        REQUIRE(fit.r_squared >= 0.0);
        REQUIRE(fit.r_squared <= 1.0);
    }
}

TEST_CASE("break-even from fit") {
    OlsFit fit;
    fit.a = 8.0;
    fit.b = 10.0;
    BreakevenEstimate est = breakeven_from_fit(fit, 14.0);
    CHECK(est.defined);
    CHECK(est.alpha == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(est.reachable);

    est = breakeven_from_fit(fit, 8.0);
    CHECK(est.alpha == doctest::Approx(0.0));

    est = breakeven_from_fit(fit, 20.0);
    CHECK_FALSE(est.reachable); // 1.2 > 1

    fit.b = -1.0;
    est = breakeven_from_fit(fit, 14.0);
    CHECK_FALSE(est.defined);
}

TEST_CASE("break-even inverts the fitted line exactly") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 20; ++i) {
        const double x = static_cast<double>(i) / 20.0;
        pts.push_back({x, 4.0 + 9.0 * x});
    }
    OlsFit fit = ols_fit(pts);
    for (double x : {0.05, 0.3, 0.77}) {
        BreakevenEstimate est = breakeven_from_fit(fit, fit.a + fit.b * x);
        CHECK(est.alpha == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("delta-method interval") {
    OlsFit fit;
    fit.a = 8.0;
    fit.b = 10.0;
    fit.n = 50;

    SUBCASE("no uncertainty collapses to a point") {
        Interval ci = delta_ci(fit, 14.0);
        CHECK(ci.lo == doctest::Approx(0.6));
        CHECK(ci.hi == doctest::Approx(0.6));
    }
    SUBCASE("width matches the hand-computed variance") {
        fit.se_a = 0.4;
        fit.se_b = 0.9;
        fit.cov_ab = -0.2;
        const double T = 14.0;
        const double var = 0.4 * 0.4 / 100.0 + 36.0 * 0.81 / 1e4 + 2.0 * 6.0 * (-0.2) / 1e3;
        Interval ci = delta_ci(fit, T, 0.95);
        const double z = normal_quantile(0.975);
        CHECK(ci.hi - ci.lo == doctest::Approx(2.0 * z * std::sqrt(var)).epsilon(1e-9));
    }
    SUBCASE("doubling all standard errors doubles the width") {
        fit.se_a = 0.4;
        fit.se_b = 0.9;
        fit.cov_ab = 0.1;
        Interval narrow = delta_ci(fit, 14.0);
        fit.se_a *= 2.0;
        fit.se_b *= 2.0;
        fit.cov_ab *= 4.0;
        Interval wide = delta_ci(fit, 14.0);
        CHECK(wide.hi - wide.lo == doctest::Approx(2.0 * (narrow.hi - narrow.lo)).epsilon(1e-9));
    }
    SUBCASE("width is monotone in each standard error (nonneg covariance)") {
        fit.se_a = 0.4;
        fit.se_b = 0.9;
        fit.cov_ab = 0.05;
        const double w0 = [&] {
            Interval ci = delta_ci(fit, 14.0);
            return ci.hi - ci.lo;
        }();
        fit.se_a = 0.6;
        const double w1 = [&] {
            Interval ci = delta_ci(fit, 14.0);
            return ci.hi - ci.lo;
        }();
        fit.se_b = 1.2;
        const double w2 = [&] {
            Interval ci = delta_ci(fit, 14.0);
            return ci.hi - ci.lo;
        }();
        CHECK(w1 > w0);
        CHECK(w2 > w1);
    }
    SUBCASE("undefined slope throws") {
        fit.b = 0.0;
        CHECK_THROWS_AS(delta_ci(fit, 14.0), DomainError);
    }
}

TEST_CASE("normal quantile sanity") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959964).epsilon(1e-5));
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
}

TEST_CASE("bucket table shapes and recombination") {
    SUBCASE("single populated bucket") {
        std::vector<std::pair<double, double>> rows = {{0.45, 1.0}, {0.44, 1.1}};
        auto table = bucket_table(rows);
        std::size_t populated = 0;
        for (const auto& b : table) {
            if (b.n > 0) ++populated;
        }
        CHECK(populated == 1);
    }
    SUBCASE("direct placement of two rows") {
        std::vector<std::pair<double, double>> rows = {{0.45, 1.0}, {0.55, 1.2}};
        auto table = bucket_table(rows);
        REQUIRE(table.size() == 6);
        CHECK(table[0].label == "<30%");
        CHECK(table[2].n == 1); // 40-50%
        CHECK(table[2].mean_speedup == doctest::Approx(1.0));
        CHECK(table[3].n == 1); // 50-60%
        CHECK(table[3].mean_speedup == doctest::Approx(1.2));
        CHECK(table[5].label == ">=70%");
    }
    SUBCASE("edges are left-closed") {
        std::vector<std::pair<double, double>> rows = {{0.30, 1.0}, {0.40, 2.0}, {0.70, 3.0}};
        auto table = bucket_table(rows);
        CHECK(table[1].n == 1); // 0.30 lands in 30-40
        CHECK(table[2].n == 1); // 0.40 lands in 40-50
        CHECK(table[5].n == 1); // 0.70 lands in >=70
    }
    SUBCASE("weighted bucket means recombine to the global mean") {
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::pair<double, double>> rows;
        double total = 0;
        for (int i = 0; i < 500; ++i) {
            const double alpha = unif(gen);
            const double speedup = 0.5 + unif(gen);
            rows.push_back({alpha, speedup});
            total += speedup;
        }
        auto table = bucket_table(rows);
        double weighted = 0;
        std::size_t n = 0;
        for (const auto& b : table) {
            weighted += b.mean_speedup * static_cast<double>(b.n);
            n += b.n;
        }
        REQUIRE(n == rows.size());
        CHECK(weighted / static_cast<double>(n) ==
              doctest::Approx(total / static_cast<double>(rows.size())).epsilon(1e-9));
    }
}

TEST_CASE("delta-method coverage is calibrated at 95%") {
    // Monte Carlo: known line, Gaussian noise, check the CI covers the true
    // break-even in roughly 95% of trials.
    std::mt19937_64 gen(20240809);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.6);
    const double a = 9.0, b = 8.0, alpha_true = 0.55;
    const double tps_base = a + b * alpha_true;
    int covered = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 100; ++i) {
            const double x = unif(gen);
            pts.push_back({x, a + b * x + noise(gen)});
        }
        OlsFit fit = ols_fit(pts);
        if (fit.b <= 0) continue;
        Interval ci = delta_ci(fit, tps_base, 0.95);
        if (alpha_true >= ci.lo && alpha_true <= ci.hi) ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;
    CHECK(coverage >= 0.93);
    CHECK(coverage <= 0.97);
}
