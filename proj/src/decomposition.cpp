#include "fluidiqr/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fluidiqr/errors.hpp"
#include "fluidiqr/loess.hpp"

namespace fluidiqr {

namespace {

int odd_at_least(double x) {
    int k = static_cast<int>(std::ceil(x));
    if (k % 2 == 0) ++k;
    return std::max(k, 3);
}

void check_window(int w, const char* name) {
    if (w < 3 || w % 2 == 0) {
        throw std::invalid_argument(std::string(name) + " must be an odd integer >= 3");
    }
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

// One seasonal-trend refinement pass; updates seasonal and trend in place.
void inner_pass(const std::vector<double>& y, int period, const StlParams& p,
                const std::vector<double>* rw, std::vector<double>& seasonal,
                std::vector<double>& trend) {
    const std::size_t n = y.size();
    const std::size_t np = static_cast<std::size_t>(period);

    std::vector<double> detrended(n);
    for (std::size_t i = 0; i < n; ++i) detrended[i] = y[i] - trend[i];

    // smooth each cycle-subseries, extending one position past both ends so the
    // low-pass below never runs out of points
    std::vector<double> cycle(n + 2 * np);
    const LoessParams seasonal_fit{p.seasonal_window, 1};
    std::vector<double> sub, subw;
    for (std::size_t ph = 0; ph < np; ++ph) {
        sub.clear();
        subw.clear();
        for (std::size_t j = ph; j < n; j += np) {
            sub.push_back(detrended[j]);
            if (rw) subw.push_back((*rw)[j]);
        }
        const long len = static_cast<long>(sub.size());
        if (p.periodic_seasonal) {
            double sw = 0.0, sv = 0.0;
            for (long k = 0; k < len; ++k) {
                const double w = rw ? subw[static_cast<std::size_t>(k)] : 1.0;
                sw += w;
                sv += w * sub[static_cast<std::size_t>(k)];
            }
            const double mean = sw > 0.0 ? sv / sw
                                         : std::accumulate(sub.begin(), sub.end(), 0.0) /
                                               static_cast<double>(len);
            for (long k = -1; k <= len; ++k) {
                cycle[static_cast<std::size_t>(static_cast<long>(ph) + k * period + period)] =
                    mean;
            }
        } else {
            const std::vector<double>* wptr = rw ? &subw : nullptr;
            for (long k = -1; k <= len; ++k) {
                const double v = loess_eval_at(sub, seasonal_fit, static_cast<double>(k), wptr);
                cycle[static_cast<std::size_t>(static_cast<long>(ph) + k * period + period)] = v;
            }
        }
    }

    // low-pass the extended cycle values down to n points
    const auto ma1 = moving_average(cycle, period);
    const auto ma2 = moving_average(ma1, period);
    const auto ma3 = moving_average(ma2, 3);
    const auto lowpass = loess_smooth(ma3, LoessParams{p.lowpass_window, 1});

    for (std::size_t i = 0; i < n; ++i) seasonal[i] = cycle[i + np] - lowpass[i];

    std::vector<double> deseasonalized(n);
    for (std::size_t i = 0; i < n; ++i) deseasonalized[i] = y[i] - seasonal[i];
    trend = loess_smooth(deseasonalized, LoessParams{p.trend_window, 1}, rw);
}

}  // namespace

std::string to_string(DecompositionMethod m) {
    switch (m) {
        case DecompositionMethod::stl: return "stl";
        case DecompositionMethod::stl_robust: return "stl-robust";
        case DecompositionMethod::twitter: return "twitter";
        case DecompositionMethod::mstl: return "mstl";
    }
    return "unknown";
}

StlParams StlParams::resolved(int period) const {
    if (period < 2) throw std::invalid_argument("seasonal period must be >= 2");
    StlParams r = *this;
    if (r.seasonal_window <= 0) r.seasonal_window = 169;
    check_window(r.seasonal_window, "seasonal window");
    if (r.trend_window <= 0) {
        r.trend_window = r.periodic_seasonal
                             ? odd_at_least(1.5 * period)
                             : odd_at_least(1.5 * period /
                                            (1.0 - 1.5 / static_cast<double>(r.seasonal_window)));
    }
    check_window(r.trend_window, "trend window");
    if (r.lowpass_window <= 0) r.lowpass_window = odd_at_least(period);
    check_window(r.lowpass_window, "low-pass window");
    if (r.inner_iterations <= 0) r.inner_iterations = r.robust ? 1 : 2;
    if (r.outer_iterations < 0) r.outer_iterations = r.robust ? 15 : 0;
    if (!r.robust && r.outer_iterations != 0) {
        throw std::invalid_argument("outer iterations require the robust flag");
    }
    return r;
}

Decomposition::Decomposition(DecompositionMethod method_, std::int64_t start,
                             std::vector<double> observed_, std::vector<double> trend_,
                             std::vector<SeasonalComponent> seasonals_,
                             std::vector<double> remainder_, std::vector<double> robustness_)
    : method(method_),
      start_epoch_s(start),
      observed(std::move(observed_)),
      trend(std::move(trend_)),
      seasonals(std::move(seasonals_)),
      remainder(std::move(remainder_)),
      robustness(std::move(robustness_)) {
    const std::size_t n = observed.size();
    if (trend.size() != n || remainder.size() != n || robustness.size() != n) {
        throw LengthMismatch("decomposition components", n, trend.size());
    }
    for (const auto& s : seasonals) {
        if (s.values.size() != n) throw LengthMismatch("seasonal component", n, s.values.size());
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = trend[i] + remainder[i];
        for (const auto& s : seasonals) sum += s.values[i];
        if (std::fabs(observed[i] - sum) > 1e-9) {
            throw std::logic_error("decomposition does not reconstruct the input at index " +
                                   std::to_string(i));
        }
    }
}

const std::vector<double>* Decomposition::seasonal_for(int period) const {
    for (const auto& s : seasonals) {
        if (s.period == period) return &s.values;
    }
    return nullptr;
}

double bisquare(double u) {
    if (u < 0.0) u = -u;
    if (u >= 1.0) return 0.0;
    const double t = 1.0 - u * u;
    return t * t;
}

std::vector<double> robustness_weights(const std::vector<double>& remainder) {
    if (remainder.empty()) throw EmptyInput("robustness weights of an empty remainder");
    std::vector<double> abs_r(remainder.size());
    std::transform(remainder.begin(), remainder.end(), abs_r.begin(),
                   [](double r) { return std::fabs(r); });
    const double scale = 6.0 * median(abs_r);
    if (scale == 0.0) return ones(remainder.size());
    std::vector<double> w(remainder.size());
    for (std::size_t i = 0; i < remainder.size(); ++i) w[i] = bisquare(abs_r[i] / scale);
    return w;
}

std::vector<double> moving_average(const std::vector<double>& x, int length) {
    if (length < 1) throw std::invalid_argument("moving average length must be >= 1");
    const std::size_t len = static_cast<std::size_t>(length);
    if (x.size() < len) throw SeriesTooShort(x.size(), len);
    std::vector<double> out(x.size() - len + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += x[i];
    out[0] = acc / static_cast<double>(length);
    for (std::size_t i = 1; i < out.size(); ++i) {
        acc += x[i + len - 1] - x[i - 1];
        out[i] = acc / static_cast<double>(length);
    }
    return out;
}

std::vector<double> piecewise_median(const std::vector<double>& values, int span) {
    if (span < 1) throw std::invalid_argument("median span must be >= 1");
    if (values.empty()) throw EmptyInput("piecewise median of an empty series");
    std::vector<double> out(values.size());
    std::vector<double> block;
    for (std::size_t lo = 0; lo < values.size(); lo += static_cast<std::size_t>(span)) {
        const std::size_t hi = std::min(values.size(), lo + static_cast<std::size_t>(span));
        block.assign(values.begin() + static_cast<std::ptrdiff_t>(lo),
                     values.begin() + static_cast<std::ptrdiff_t>(hi));
        const double m = median(block);
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(lo),
                  out.begin() + static_cast<std::ptrdiff_t>(hi), m);
    }
    return out;
}

Decomposition stl_fit(const HourlySeries& series, int period, const StlParams& params) {
    const StlParams p = params.resolved(period);
    const std::size_t n = series.size();
    if (n < 2 * static_cast<std::size_t>(period)) {
        throw SeriesTooShort(n, 2 * static_cast<std::size_t>(period));
    }

    const std::vector<double>& y = series.values;
    std::vector<double> seasonal(n, 0.0);
    std::vector<double> trend(n, 0.0);

    for (int it = 0; it < p.inner_iterations; ++it) {
        inner_pass(y, period, p, nullptr, seasonal, trend);
    }
    std::vector<double> weights;
    for (int outer = 0; outer < p.outer_iterations; ++outer) {
        std::vector<double> rem(n);
        for (std::size_t i = 0; i < n; ++i) rem[i] = y[i] - trend[i] - seasonal[i];
        weights = robustness_weights(rem);
        for (int it = 0; it < p.inner_iterations; ++it) {
            inner_pass(y, period, p, &weights, seasonal, trend);
        }
    }

    std::vector<double> remainder(n);
    for (std::size_t i = 0; i < n; ++i) remainder[i] = y[i] - trend[i] - seasonal[i];
    if (weights.empty()) weights = ones(n);

    return Decomposition(p.robust ? DecompositionMethod::stl_robust : DecompositionMethod::stl,
                         series.start_epoch_s, y, std::move(trend),
                         {{period, std::move(seasonal)}}, std::move(remainder),
                         std::move(weights));
}

Decomposition twitter_fit(const HourlySeries& series, int period, int median_span) {
    if (median_span < period) {
        throw std::invalid_argument("median span must cover at least one full period");
    }
    const Decomposition base = stl_fit(series, period, StlParams{});
    const std::vector<double>& seasonal = base.seasonals.front().values;

    std::vector<double> trend = piecewise_median(series.values, median_span);
    const std::size_t n = series.size();
    std::vector<double> remainder(n);
    for (std::size_t i = 0; i < n; ++i) {
        remainder[i] = series.values[i] - trend[i] - seasonal[i];
    }
    return Decomposition(DecompositionMethod::twitter, series.start_epoch_s, series.values,
                         std::move(trend), {{period, seasonal}}, std::move(remainder), ones(n));
}

Decomposition mstl_fit(const HourlySeries& series, const std::vector<int>& periods,
                       const StlParams& params, int rounds) {
    if (periods.empty()) throw std::invalid_argument("at least one seasonal period is required");
    for (std::size_t k = 1; k < periods.size(); ++k) {
        if (periods[k] <= periods[k - 1]) throw PeriodsNotAscending();
    }
    if (rounds < 1) throw std::invalid_argument("refinement rounds must be >= 1");
    const std::size_t n = series.size();
    const int max_period = periods.back();
    if (n < 2 * static_cast<std::size_t>(max_period)) {
        throw SeriesTooShort(n, 2 * static_cast<std::size_t>(max_period));
    }

    std::vector<double> deseasonalized = series.values;
    std::vector<std::vector<double>> seasonal(periods.size(), std::vector<double>(n, 0.0));
    Decomposition last;

    for (int round = 0; round < rounds; ++round) {
        for (std::size_t k = 0; k < periods.size(); ++k) {
            for (std::size_t i = 0; i < n; ++i) deseasonalized[i] += seasonal[k][i];
            last = stl_fit(HourlySeries(series.start_epoch_s, deseasonalized), periods[k],
                           params);
            seasonal[k] = last.seasonals.front().values;
            for (std::size_t i = 0; i < n; ++i) deseasonalized[i] -= seasonal[k][i];
        }
    }

    std::vector<double> remainder(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = series.values[i] - last.trend[i];
        for (std::size_t k = 0; k < periods.size(); ++k) acc -= seasonal[k][i];
        remainder[i] = acc;
    }
    std::vector<SeasonalComponent> components;
    components.reserve(periods.size());
    for (std::size_t k = 0; k < periods.size(); ++k) {
        components.push_back({periods[k], std::move(seasonal[k])});
    }
    return Decomposition(DecompositionMethod::mstl, series.start_epoch_s, series.values,
                         last.trend, std::move(components), std::move(remainder),
                         last.robustness);
}

}  // namespace fluidiqr
