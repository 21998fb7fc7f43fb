#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fluidiqr/timeseries.hpp"

namespace fluidiqr {

/** Term toggles for the benchmark datasets: d1 keeps only the daily cycle,
 *  d2 adds the linear trend, d3 adds the weekly cycle on top. */
enum class DatasetProfile { d1, d2, d3 };

DatasetProfile profile_from_string(const std::string& name);
std::string to_string(DatasetProfile profile);

/** Generator settings. The conversion curve is
 *      daily * |sin(i pi / 24)| + weekly * |sin(i pi / 168)|
 *      + (i / (n - 1)) * trend + noise,
 *  clamped at zero. Injected strong outliers carry the ground-truth labels;
 *  the noise additionally contains unlabelled mild excursions so quiet hours
 *  see realistic borderline deviations. Spike and mild magnitudes scale with
 *  noise_sigma (a fallback scale keeps spikes visible when noise_sigma is 0).
 */
struct SynthConfig {
    DatasetProfile profile = DatasetProfile::d3;
    int days = 90;
    std::uint64_t seed = 42;
    std::int64_t start_epoch_s = 1493596800;  // 2017-05-01T00:00:00Z

    double daily_amplitude = 0.05;
    double weekly_amplitude = 0.03;
    double trend_amplitude = 0.02;
    double noise_sigma = 0.001;

    double outlier_rate = 0.05;        // labelled strong spikes, floor(rate * n) of them
    double spike_scale = 11.0;         // median spike magnitude in noise-sigma units
    double spike_log_sigma = 0.5;      // log-normal shape of spike magnitudes
    double spike_up_probability = 0.7; // conversion spikes are mostly upward
    double spike_placement_floor = 0.01;  // minimum relative draw weight per hour

    double mild_rate = 0.04;           // unlabelled mild excursions mixed into the noise
    double mild_scale = 2.0;           // median mild magnitude in noise-sigma units
    double mild_log_sigma = 0.22;

    double sessions_daily = 400.0;   // peak hourly rate
    double sessions_weekly = 50.0;   // weekly modulation of the peak
    double sessions_trend = 100.0;   // peak growth over the covered range
    double sessions_sigma = 20.0;    // jitter on the peak level, scales down with activity
    double sessions_floor = 2.0;     // residual night traffic rate

    double basket_value = 25.0;        // revenue per transaction

    int hours() const { return days * 24; }
    double effective_weekly() const {
        return profile == DatasetProfile::d3 ? weekly_amplitude : 0.0;
    }
    double effective_trend() const {
        return profile == DatasetProfile::d1 ? 0.0 : trend_amplitude;
    }
};

/** Conversion series with aligned session counts and ground-truth labels. */
struct LabelledSeries {
    HourlySeries conversion;
    std::vector<double> sessions;
    std::vector<std::uint8_t> labels;
};

/** Deterministic conversion curve value at hour i (no noise, no spikes). */
double base_conversion_at(const SynthConfig& config, std::size_t i);

/** Draw floor(rate * n) distinct spike positions (draw weight follows the
 *  hour's daily activity level), add a signed log-normal spike to each, and
 *  return the labels. A spike that clamping would swallow entirely is applied
 *  upward instead so every labelled point visibly differs. */
std::vector<std::uint8_t> inject_outliers(std::vector<double>& values, const SynthConfig& config,
                                          std::mt19937_64& rng);

/** Hourly session counts. The weekly cycle and the trend modulate the peak
 *  level, the squared daily shape scales it down towards the night hours, and
 *  the count is drawn Poisson around the resulting rate (plus sessions_floor).
 *  Independent stream derived from the same seed. */
std::vector<double> generate_sessions(const SynthConfig& config);

/** Full dataset: noisy conversion with injected outliers, sessions, labels. */
LabelledSeries generate_series(const SynthConfig& config);

/** Materialize as e-commerce observations: transactions = conversion *
 *  sessions (kept fractional so conversion round-trips), revenue =
 *  transactions * basket_value. Hours with zero sessions read back as
 *  conversion 0 regardless of the generated value. */
EcomSeries to_ecom_series(const LabelledSeries& data, double basket_value = 25.0);

}  // namespace fluidiqr
