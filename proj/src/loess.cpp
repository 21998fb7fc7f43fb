#include "fluidiqr/loess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fluidiqr/errors.hpp"

namespace fluidiqr {

namespace {

constexpr double kSingularTol = 1e-12;

void validate(const std::vector<double>& y, const LoessParams& p,
              const std::vector<double>* robustness) {
    if (y.empty()) throw EmptyInput("loess input is empty");
    if (p.window < 1 || p.window % 2 == 0) {
        throw std::invalid_argument("loess window must be a positive odd integer");
    }
    if (p.degree < 0 || p.degree > 2) {
        throw std::invalid_argument("loess degree must be 0, 1 or 2");
    }
    if (robustness && robustness->size() != y.size()) {
        throw LengthMismatch("series vs robustness weights", y.size(), robustness->size());
    }
}

struct IndexRange {
    std::size_t lo;
    std::size_t hi;  // inclusive
};

// The `window` indices nearest to x; distance ties prefer the lower index.
IndexRange neighbors_of(double x, std::size_t n, int window) {
    const std::size_t q = std::min<std::size_t>(static_cast<std::size_t>(window), n);
    const double fl = std::floor(x);
    double cand = (x - fl > (fl + 1.0) - x) ? fl + 1.0 : fl;
    cand = std::clamp(cand, 0.0, static_cast<double>(n - 1));
    std::size_t lo = static_cast<std::size_t>(cand);
    std::size_t hi = lo;
    const double inf = std::numeric_limits<double>::infinity();
    while (hi - lo + 1 < q) {
        const double dl = lo > 0 ? std::fabs(x - static_cast<double>(lo - 1)) : inf;
        const double dr = hi + 1 < n ? std::fabs(static_cast<double>(hi + 1) - x) : inf;
        if (dl <= dr) {
            --lo;
        } else {
            ++hi;
        }
    }
    return {lo, hi};
}

double tricube(double u) {
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

struct Moments {
    double m[5] = {0, 0, 0, 0, 0};  // weighted sums of t^0..t^4
    double r[3] = {0, 0, 0};        // weighted sums of y t^0..t^2
};

Moments accumulate(const std::vector<double>& y, const std::vector<double>* robustness,
                   double x, IndexRange nb, bool use_robustness) {
    const double dmax = std::max(x - static_cast<double>(nb.lo),
                                 static_cast<double>(nb.hi) - x);
    Moments acc;
    for (std::size_t j = nb.lo; j <= nb.hi; ++j) {
        const double t = static_cast<double>(j) - x;
        double w = dmax <= 0.0 ? 1.0 : tricube(std::fabs(t) / dmax);
        if (use_robustness && robustness) w *= (*robustness)[j];
        const double wt = w * t;
        const double wtt = wt * t;
        acc.m[0] += w;
        acc.m[1] += wt;
        acc.m[2] += wtt;
        acc.m[3] += wtt * t;
        acc.m[4] += wtt * t * t;
        acc.r[0] += w * y[j];
        acc.r[1] += wt * y[j];
        acc.r[2] += wtt * y[j];
    }
    return acc;
}

// Solve the 3x3 normal equations; returns false when the system is singular.
bool solve_quadratic(const Moments& acc, double& b0) {
    double a[3][4] = {{acc.m[0], acc.m[1], acc.m[2], acc.r[0]},
                      {acc.m[1], acc.m[2], acc.m[3], acc.r[1]},
                      {acc.m[2], acc.m[3], acc.m[4], acc.r[2]}};
    double scale = 0.0;
    for (auto& row : a) {
        for (int c = 0; c < 3; ++c) scale = std::max(scale, std::fabs(row[c]));
    }
    if (scale == 0.0) return false;
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int rrow = col + 1; rrow < 3; ++rrow) {
            if (std::fabs(a[rrow][col]) > std::fabs(a[piv][col])) piv = rrow;
        }
        if (std::fabs(a[piv][col]) <= kSingularTol * scale) return false;
        std::swap(a[col], a[piv]);
        std::swap(perm[col], perm[piv]);
        for (int rrow = col + 1; rrow < 3; ++rrow) {
            const double f = a[rrow][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[rrow][c] -= f * a[col][c];
        }
    }
    double b[3];
    for (int rrow = 2; rrow >= 0; --rrow) {
        double acc_rhs = a[rrow][3];
        for (int c = rrow + 1; c < 3; ++c) acc_rhs -= a[rrow][c] * b[c];
        b[rrow] = acc_rhs / a[rrow][rrow];
    }
    b0 = b[0];
    return true;
}

double fit_at(const std::vector<double>& y, const LoessParams& p, double x,
              const std::vector<double>* robustness) {
    const IndexRange nb = neighbors_of(x, y.size(), p.window);
    Moments acc = accumulate(y, robustness, x, nb, true);

    if (p.degree == 2) {
        double b0 = 0.0;
        if (solve_quadratic(acc, b0)) return b0;
    } else if (p.degree == 1) {
        const double det = acc.m[0] * acc.m[2] - acc.m[1] * acc.m[1];
        if (det > kSingularTol * acc.m[0] * acc.m[2] && det > 0.0) {
            return (acc.m[2] * acc.r[0] - acc.m[1] * acc.r[1]) / det;
        }
    }
    // degree-0 refit; with every combined weight zero fall back to plain
    // tricube weights so the result stays defined
    if (acc.m[0] <= 0.0) acc = accumulate(y, nullptr, x, nb, false);
    return acc.r[0] / acc.m[0];
}

}  // namespace

std::vector<double> loess_smooth(const std::vector<double>& y, const LoessParams& params,
                                 const std::vector<double>* robustness) {
    validate(y, params, robustness);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = fit_at(y, params, static_cast<double>(i), robustness);
    }
    return out;
}

double loess_eval_at(const std::vector<double>& y, const LoessParams& params, double x,
                     const std::vector<double>* robustness) {
    validate(y, params, robustness);
    return fit_at(y, params, x, robustness);
}

}  // namespace fluidiqr
