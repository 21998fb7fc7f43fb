#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "fluidiqr/errors.hpp"
#include "fluidiqr/loess.hpp"

using namespace fluidiqr;

namespace {

// Reference fit built the long way round: pick the window nearest indices
// (ties to the lower side), weight them with tricube * robustness, then solve
// the weighted normal equations by closed-form Cramer rules in long double
// and evaluate at x. Degrees 0 and 1 use raw monomials; the quadratic basis
// is centered on x and scaled by the neighborhood radius, otherwise the
// explicit determinants cancel catastrophically. Singular systems drop to
// the weighted mean, like the production code.
double reference_fit(const std::vector<double>& y, int window, int degree, double x,
                     const std::vector<double>* robustness) {
    const std::size_t n = y.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = std::fabs(static_cast<double>(a) - x);
        const double db = std::fabs(static_cast<double>(b) - x);
        if (da != db) return da < db;
        return a < b;
    });
    const std::size_t q = std::min<std::size_t>(static_cast<std::size_t>(window), n);
    idx.resize(q);

    long double dmax = 0.0L;
    for (std::size_t j : idx) {
        dmax = std::max<long double>(dmax, std::fabs(static_cast<double>(j) - x));
    }
    std::vector<long double> w(q);
    for (std::size_t k = 0; k < q; ++k) {
        long double u = dmax > 0.0L
                            ? std::fabs(static_cast<long double>(idx[k]) - x) / dmax
                            : 0.0L;
        long double t = 1.0L - u * u * u;
        w[k] = t * t * t;
        if (robustness) w[k] *= (*robustness)[idx[k]];
    }

    long double s[5] = {0, 0, 0, 0, 0};
    long double r[3] = {0, 0, 0};
    for (std::size_t k = 0; k < q; ++k) {
        const long double j = static_cast<long double>(idx[k]);
        long double p = w[k];
        for (int d = 0; d <= 4; ++d) {
            s[d] += p;
            if (d <= 2) r[d] += p * y[idx[k]];
            p *= j;
        }
    }
    const long double mean = s[0] > 0.0L ? r[0] / s[0] : 0.0L;

    if (degree == 1) {
        const long double det = s[0] * s[2] - s[1] * s[1];
        if (!(det > 1e-12L * s[0] * s[2])) return static_cast<double>(mean);
        const long double b0 = (r[0] * s[2] - r[1] * s[1]) / det;
        const long double b1 = (s[0] * r[1] - s[1] * r[0]) / det;
        return static_cast<double>(b0 + b1 * static_cast<long double>(x));
    }
    if (degree == 2) {
        const long double h = dmax > 0.0L ? dmax : 1.0L;
        long double c[5] = {0, 0, 0, 0, 0};
        long double g[3] = {0, 0, 0};
        for (std::size_t k = 0; k < q; ++k) {
            const long double u = (static_cast<long double>(idx[k]) - x) / h;
            long double p = w[k];
            for (int d = 0; d <= 4; ++d) {
                c[d] += p;
                if (d <= 2) g[d] += p * y[idx[k]];
                p *= u;
            }
        }
        const long double det = c[0] * (c[2] * c[4] - c[3] * c[3]) -
                                c[1] * (c[1] * c[4] - c[2] * c[3]) +
                                c[2] * (c[1] * c[3] - c[2] * c[2]);
        long double scale = 0.0L;
        for (int d = 0; d <= 4; ++d) scale = std::max(scale, std::fabs(c[d]));
        if (!(std::fabs(det) > 1e-10L * scale * scale * scale)) {
            return static_cast<double>(mean);
        }
        // value at x is the intercept of the centered fit
        const long double b0 = (g[0] * (c[2] * c[4] - c[3] * c[3]) -
                                c[1] * (g[1] * c[4] - g[2] * c[3]) +
                                c[2] * (g[1] * c[3] - g[2] * c[2])) /
                               det;
        return static_cast<double>(b0);
    }
    return static_cast<double>(mean);
}

}  // namespace

TEST_CASE("loess agrees with a brute-force weighted least squares fit") {
    std::mt19937 rng(20170501);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int n = 1; n <= 20; ++n) {
        std::vector<double> y(static_cast<std::size_t>(n));
        for (double& v : y) v = val(rng);
        for (int window : {1, 3, 5, 7, 9}) {
            for (int degree : {0, 1}) {
                const auto got = loess_smooth(y, {window, degree});
                REQUIRE(got.size() == y.size());
                for (std::size_t i = 0; i < y.size(); ++i) {
                    const double want =
                        reference_fit(y, window, degree, static_cast<double>(i), nullptr);
                    CHECK(got[i] == doctest::Approx(want).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("quadratic loess matches the reference on interior points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::vector<double> y(20);
    for (double& v : y) v = val(rng);
    for (int window : {5, 7, 9}) {
        const auto got = loess_smooth(y, {window, 2});
        for (std::size_t i = 2; i + 2 < y.size(); ++i) {
            const double want = reference_fit(y, window, 2, static_cast<double>(i), nullptr);
            CHECK(got[i] == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("loess reproduces polynomial data of its own degree") {
    std::vector<double> line(20), quad(20);
    for (std::size_t i = 0; i < line.size(); ++i) {
        const double x = static_cast<double>(i);
        line[i] = 3.0 - 0.25 * x;
        quad[i] = 1.0 + 0.5 * x - 0.03 * x * x;
    }
    const auto l = loess_smooth(line, {7, 1});
    for (std::size_t i = 0; i < line.size(); ++i) {
        CHECK(l[i] == doctest::Approx(line[i]).epsilon(1e-10));
    }
    const auto c = loess_smooth(std::vector<double>(15, 4.2), {5, 0});
    for (double v : c) CHECK(v == doctest::Approx(4.2).epsilon(1e-12));

    const auto q = loess_smooth(quad, {9, 2});
    for (std::size_t i = 0; i < quad.size(); ++i) {
        CHECK(q[i] == doctest::Approx(quad[i]).epsilon(1e-8));
    }
}

TEST_CASE("a window wider than the series uses every point") {
    std::vector<double> y{1.0, 2.0, 6.0};
    const auto a = loess_smooth(y, {99, 1});
    const auto b = loess_smooth(y, {3, 1});
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("eval at out-of-range positions extends the local fit") {
    std::vector<double> line(12);
    for (std::size_t i = 0; i < line.size(); ++i) line[i] = 2.0 + 0.5 * static_cast<double>(i);
    CHECK(loess_eval_at(line, {5, 1}, -1.0) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(loess_eval_at(line, {5, 1}, 12.0) == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(loess_eval_at(line, {5, 1}, 3.0) == doctest::Approx(3.5).epsilon(1e-10));
}

TEST_CASE("zero robustness weight removes a corrupted point from the fit") {
    std::vector<double> y(15);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 + 0.2 * static_cast<double>(i);
    std::vector<double> corrupted = y;
    corrupted[7] += 50.0;
    std::vector<double> rob(y.size(), 1.0);
    rob[7] = 0.0;
    const auto fit = loess_smooth(corrupted, {7, 1}, &rob);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i == 7) continue;  // the fit at the hole itself interpolates the line too
        CHECK(fit[i] == doctest::Approx(y[i]).epsilon(1e-9));
    }
    CHECK(fit[7] == doctest::Approx(y[7]).epsilon(1e-9));
}

TEST_CASE("loess rejects invalid inputs") {
    CHECK_THROWS_AS(loess_smooth({}, {5, 1}), EmptyInput);
    CHECK_THROWS_AS(loess_smooth({1.0, 2.0}, {4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(loess_smooth({1.0, 2.0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(loess_smooth({1.0, 2.0}, {5, 3}), std::invalid_argument);
    CHECK_THROWS_AS(loess_smooth({1.0, 2.0}, {5, -1}), std::invalid_argument);
    std::vector<double> rob{1.0};
    CHECK_THROWS_AS(loess_smooth({1.0, 2.0}, {5, 1}, &rob), LengthMismatch);
}
