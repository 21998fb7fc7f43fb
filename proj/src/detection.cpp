#include "fluidiqr/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluidiqr/errors.hpp"

namespace fluidiqr {

namespace {

OutlierReport make_report(std::string method, const std::vector<double>& remainder,
                          std::vector<double> transformed, std::vector<double> w) {
    if (remainder.size() < 2) {
        throw TooFewPoints("outlier detection needs at least two points, got " +
                           std::to_string(remainder.size()));
    }
    const Quartiles q = quartiles(transformed);
    const double iqr = q.iqr();

    OutlierReport rep;
    rep.method = std::move(method);
    rep.value = remainder;
    rep.transformed = std::move(transformed);
    rep.w = std::move(w);
    const std::size_t n = remainder.size();
    rep.fence_low.resize(n);
    rep.fence_high.resize(n);
    rep.flag.assign(n, 0);
    rep.direction.assign(n, FlagDirection::none);
    for (std::size_t i = 0; i < n; ++i) {
        rep.fence_low[i] = q.q1 - rep.w[i] * iqr;
        rep.fence_high[i] = q.q3 + rep.w[i] * iqr;
        if (rep.transformed[i] < rep.fence_low[i]) {
            rep.flag[i] = 1;
            rep.direction[i] = FlagDirection::low;
        } else if (rep.transformed[i] > rep.fence_high[i]) {
            rep.flag[i] = 1;
            rep.direction[i] = FlagDirection::high;
        }
    }
    return rep;
}

}  // namespace

std::string to_string(FenceMode mode) {
    switch (mode) {
        case FenceMode::standard_inner: return "inner";
        case FenceMode::standard_outer: return "outer";
        case FenceMode::fluid: return "fluid";
    }
    return "unknown";
}

std::size_t OutlierReport::total_flags() const {
    return static_cast<std::size_t>(std::count(flag.begin(), flag.end(), std::uint8_t{1}));
}

std::vector<std::size_t> OutlierReport::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flag.size(); ++i) {
        if (flag[i]) out.push_back(i);
    }
    return out;
}

double fluid_weight(double sessions, double s_min, double s_max, double w_low_activity,
                    double w_high_activity) {
    if (s_max < s_min) throw std::invalid_argument("session extremes are out of order");
    if (s_max == s_min) return 0.5 * (w_low_activity + w_high_activity);
    const double frac = (sessions - s_min) / (s_max - s_min);
    return w_low_activity - frac * (w_low_activity - w_high_activity);
}

OutlierReport standard_iqr_detect(const std::vector<double>& remainder, double multiplier,
                                  bool transform_remainder) {
    if (multiplier <= 0.0) throw std::invalid_argument("fence multiplier must be positive");
    std::vector<double> transformed =
        transform_remainder ? asinh_transform(remainder) : remainder;
    return make_report("iqr-" + std::to_string(multiplier).substr(0, 3), remainder,
                       std::move(transformed),
                       std::vector<double>(remainder.size(), multiplier));
}

OutlierReport fluid_iqr_detect(const std::vector<double>& remainder,
                               const std::vector<double>& sessions, const FenceConfig& config) {
    if (sessions.size() != remainder.size()) {
        throw LengthMismatch("remainder vs sessions", remainder.size(), sessions.size());
    }
    if (config.w_high_activity > config.w_low_activity) {
        throw std::invalid_argument("high-activity multiplier must not exceed low-activity one");
    }
    if (config.w_high_activity <= 0.0) {
        throw std::invalid_argument("fence multipliers must be positive");
    }
    std::vector<double> transformed =
        config.transform_remainder ? asinh_transform(remainder) : remainder;
    std::vector<double> scale_sessions =
        config.transform_sessions ? asinh_transform(sessions) : sessions;
    const auto [mn_it, mx_it] =
        std::minmax_element(scale_sessions.begin(), scale_sessions.end());
    const double s_min = *mn_it;
    const double s_max = *mx_it;
    std::vector<double> w(remainder.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = fluid_weight(scale_sessions[i], s_min, s_max, config.w_low_activity,
                            config.w_high_activity);
    }
    return make_report("fluid", remainder, std::move(transformed), std::move(w));
}

OutlierReport detect_outliers(const std::vector<double>& remainder,
                              const std::vector<double>* sessions, const FenceConfig& config) {
    switch (config.mode) {
        case FenceMode::standard_inner: {
            auto rep = standard_iqr_detect(remainder, 1.5, config.transform_remainder);
            rep.method = to_string(config.mode);
            return rep;
        }
        case FenceMode::standard_outer: {
            auto rep = standard_iqr_detect(remainder, 3.0, config.transform_remainder);
            rep.method = to_string(config.mode);
            return rep;
        }
        case FenceMode::fluid:
            if (!sessions) {
                throw std::invalid_argument("fluid detection requires session counts");
            }
            return fluid_iqr_detect(remainder, *sessions, config);
    }
    throw std::invalid_argument("unknown fence mode");
}

}  // namespace fluidiqr
