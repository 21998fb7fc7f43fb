#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluidiqr/timeseries.hpp"

namespace fluidiqr {

enum class FenceMode { standard_inner, standard_outer, fluid };

std::string to_string(FenceMode mode);

/** Detection settings. The per-point fence multiplier w interpolates linearly
 *  from w_low_activity at the minimum (transformed) session count down to
 *  w_high_activity at the maximum: quiet hours get the widest fence, busy
 *  hours the tightest. Standard modes use fixed multipliers 1.5 / 3.0. */
struct FenceConfig {
    FenceMode mode = FenceMode::fluid;
    double w_low_activity = 3.0;
    double w_high_activity = 1.5;
    bool transform_remainder = true;  // asinh the remainder before quartiles
    bool transform_sessions = true;   // asinh session counts before scaling w
};

enum class FlagDirection : std::uint8_t { none = 0, low = 1, high = 2 };

/** Per-point outcome of one detection run. All vectors share the input length. */
struct OutlierReport {
    std::string method;
    std::vector<double> value;        // remainder as given
    std::vector<double> transformed;  // after the optional asinh, else == value
    std::vector<double> fence_low;
    std::vector<double> fence_high;
    std::vector<double> w;            // multiplier applied at each point
    std::vector<std::uint8_t> flag;   // 1 = outlier
    std::vector<FlagDirection> direction;

    std::size_t size() const { return value.size(); }
    std::size_t total_flags() const;
    std::vector<std::size_t> indices() const;  // flagged positions, ascending
};

/** Interpolated fence multiplier for one session level. Degenerate input
 *  (s_min == s_max) yields the midpoint of the two multipliers. */
double fluid_weight(double sessions, double s_min, double s_max, double w_low_activity,
                    double w_high_activity);

/** Classic Tukey fences at q1 - m*IQR / q3 + m*IQR over the whole remainder;
 *  points strictly outside are flagged. Optionally asinh-transforms the
 *  remainder first (fences then live on the transformed scale). */
OutlierReport standard_iqr_detect(const std::vector<double>& remainder, double multiplier,
                                  bool transform_remainder = false);

/** Session-weighted fences: quartiles of the (optionally transformed)
 *  remainder, with each point's multiplier derived from its own session count
 *  via fluid_weight. Requires sessions aligned with the remainder. */
OutlierReport fluid_iqr_detect(const std::vector<double>& remainder,
                               const std::vector<double>& sessions,
                               const FenceConfig& config = {});

/** Dispatch on config.mode; sessions may be null for the standard modes. */
OutlierReport detect_outliers(const std::vector<double>& remainder,
                              const std::vector<double>* sessions, const FenceConfig& config);

}  // namespace fluidiqr
