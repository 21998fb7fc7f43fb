#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluidiqr/timeseries.hpp"

namespace fluidiqr {

enum class DecompositionMethod { stl, stl_robust, twitter, mstl };

std::string to_string(DecompositionMethod m);

/** Tuning knobs for one seasonal-trend fit. Zero (or negative) window values
 *  are resolved against the period: seasonal_window defaults to 169,
 *  trend_window to the smallest odd integer >= 1.5 * period /
 *  (1 - 1.5 / seasonal_window), lowpass_window to the smallest odd
 *  integer >= period. All resolved windows must end up odd and >= 3. */
struct StlParams {
    int seasonal_window = 0;        // 0 = default (169)
    bool periodic_seasonal = false; // force one constant value per cycle position
    int trend_window = 0;           // 0 = derive from period and seasonal window
    int lowpass_window = 0;         // 0 = smallest odd >= period
    bool robust = false;
    int inner_iterations = 0;       // 0 = default (1 when robust, else 2)
    int outer_iterations = -1;      // -1 = default (15 when robust, else 0)

    StlParams resolved(int period) const;  // fills defaults, validates
};

struct SeasonalComponent {
    int period = 0;
    std::vector<double> values;
};

/** Additive decomposition: observed = trend + sum(seasonals) + remainder,
 *  enforced to 1e-9 at construction. */
struct Decomposition {
    DecompositionMethod method = DecompositionMethod::stl;
    std::int64_t start_epoch_s = 0;
    std::vector<double> observed;
    std::vector<double> trend;
    std::vector<SeasonalComponent> seasonals;
    std::vector<double> remainder;
    std::vector<double> robustness;  // final outer-loop weights, all 1 when non-robust

    Decomposition() = default;
    Decomposition(DecompositionMethod method, std::int64_t start_epoch_s,
                  std::vector<double> observed, std::vector<double> trend,
                  std::vector<SeasonalComponent> seasonals, std::vector<double> remainder,
                  std::vector<double> robustness);

    std::size_t size() const { return observed.size(); }
    const std::vector<double>* seasonal_for(int period) const;
};

/** Tukey bisquare: (1 - u^2)^2 for 0 <= u < 1, else 0. */
double bisquare(double u);

/** Outer-loop weights W_t = bisquare(|r_t| / (6 * median|r|)); all 1 when the
 *  median absolute remainder is 0. */
std::vector<double> robustness_weights(const std::vector<double>& remainder);

/** Centered moving average of `length` consecutive points, producing
 *  size() - length + 1 values. */
std::vector<double> moving_average(const std::vector<double>& x, int length);

/** Median of consecutive blocks of `span` points, repeated across each block;
 *  the final block may be shorter. */
std::vector<double> piecewise_median(const std::vector<double>& values, int span);

/** Seasonal-trend decomposition by repeated loess smoothing. Requires
 *  series length >= 2 * period. */
Decomposition stl_fit(const HourlySeries& series, int period, const StlParams& params = {});

/** Variant that swaps the loess trend for a piecewise median of the observed
 *  values (default span two weeks of hours); seasonal comes from one
 *  non-robust stl_fit pass. */
Decomposition twitter_fit(const HourlySeries& series, int period = 24, int median_span = 336);

/** Multi-seasonal decomposition: iteratively re-fits one seasonal component
 *  per period (strictly ascending), `rounds` refinement passes. Trend comes
 *  from the final per-period fit. */
Decomposition mstl_fit(const HourlySeries& series, const std::vector<int>& periods,
                       const StlParams& params = {}, int rounds = 2);

}  // namespace fluidiqr
