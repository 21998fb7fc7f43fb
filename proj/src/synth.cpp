#include "fluidiqr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fluidiqr/errors.hpp"

namespace fluidiqr {

namespace {

constexpr std::uint64_t kSessionsStreamSalt = 0x9e3779b97f4a7c15ULL;

void validate(const SynthConfig& c) {
    if (c.days < 1) throw std::invalid_argument("days must be >= 1");
    if (c.outlier_rate < 0.0 || c.outlier_rate > 1.0) {
        throw std::invalid_argument("outlier rate must lie in [0, 1]");
    }
    if (c.mild_rate < 0.0 || c.mild_rate > 1.0) {
        throw std::invalid_argument("mild excursion rate must lie in [0, 1]");
    }
    if (c.noise_sigma < 0.0 || c.sessions_sigma < 0.0 || c.sessions_floor < 0.0) {
        throw std::invalid_argument("noise levels must be non-negative");
    }
    if (c.daily_amplitude < 0.0 || c.weekly_amplitude < 0.0 || c.trend_amplitude < 0.0) {
        throw std::invalid_argument("amplitudes must be non-negative");
    }
    if (c.start_epoch_s % seconds_per_hour != 0) {
        throw std::invalid_argument("start timestamp must be hour-aligned");
    }
}

double daily_share(std::size_t i) {
    return std::fabs(std::sin(static_cast<double>(i) * std::numbers::pi / 24.0));
}

double weekly_share(std::size_t i) {
    return std::fabs(std::sin(static_cast<double>(i) * std::numbers::pi / 168.0));
}

double trend_share(std::size_t i, std::size_t n) {
    return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
}

// spikes keep a usable size even when the caller turns noise off entirely
double effective_sigma(const SynthConfig& c) {
    return c.noise_sigma > 0.0 ? c.noise_sigma : 0.005;
}

}  // namespace

DatasetProfile profile_from_string(const std::string& name) {
    if (name == "d1") return DatasetProfile::d1;
    if (name == "d2") return DatasetProfile::d2;
    if (name == "d3") return DatasetProfile::d3;
    throw std::invalid_argument("unknown dataset profile '" + name + "'");
}

std::string to_string(DatasetProfile profile) {
    switch (profile) {
        case DatasetProfile::d1: return "d1";
        case DatasetProfile::d2: return "d2";
        case DatasetProfile::d3: return "d3";
    }
    return "unknown";
}

double base_conversion_at(const SynthConfig& c, std::size_t i) {
    const std::size_t n = static_cast<std::size_t>(c.hours());
    return c.daily_amplitude * daily_share(i) + c.effective_weekly() * weekly_share(i) +
           trend_share(i, n) * c.effective_trend();
}

std::vector<std::uint8_t> inject_outliers(std::vector<double>& values, const SynthConfig& c,
                                          std::mt19937_64& rng) {
    validate(c);
    const std::size_t n = values.size();
    std::vector<std::uint8_t> labels(n, 0);
    const std::size_t count =
        static_cast<std::size_t>(std::floor(c.outlier_rate * static_cast<double>(n)));
    if (count == 0) return labels;

    // spikes model business events, which cluster at busy hours; near-dead
    // hours keep a small floor so labelled night outliers stay possible
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double share = daily_share(i);
        weight[i] = std::max(share * share, c.spike_placement_floor);
    }

    const double sigma = effective_sigma(c);
    const double mu = std::log(c.spike_scale * sigma);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> log_mag(mu, c.spike_log_sigma);

    for (std::size_t k = 0; k < count; ++k) {
        double total = std::accumulate(weight.begin(), weight.end(), 0.0);
        double u = unit(rng) * total;
        std::size_t idx = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (weight[i] <= 0.0) continue;
            if (u < weight[i]) {
                idx = i;
                break;
            }
            u -= weight[i];
        }
        weight[idx] = 0.0;  // without replacement
        labels[idx] = 1;

        const double sign = unit(rng) < c.spike_up_probability ? 1.0 : -1.0;
        const double magnitude = std::exp(log_mag(rng));
        double spiked = values[idx] + sign * magnitude;
        if (std::max(spiked, 0.0) == std::max(values[idx], 0.0)) {
            spiked = values[idx] + magnitude;  // clamp would swallow the down-spike
        }
        values[idx] = spiked;
    }
    return labels;
}

std::vector<double> generate_sessions(const SynthConfig& c) {
    validate(c);
    const std::size_t n = static_cast<std::size_t>(c.hours());
    std::mt19937_64 rng(c.seed ^ kSessionsStreamSalt);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double share = daily_share(i);
        double level = c.sessions_daily + c.sessions_weekly * weekly_share(i) +
                       c.sessions_trend * trend_share(i, n);
        if (c.sessions_sigma > 0.0) level += c.sessions_sigma * gauss(rng);
        // weekly cycle and trend modulate the peak; the squared daily shape
        // empties the nights so low-traffic hours really carry no signal
        const double rate = std::max(level * share * share + c.sessions_floor, 0.0);
        out[i] = rate > 0.0
                     ? static_cast<double>(std::poisson_distribution<long>(rate)(rng))
                     : 0.0;
    }
    return out;
}

LabelledSeries generate_series(const SynthConfig& c) {
    validate(c);
    const std::size_t n = static_cast<std::size_t>(c.hours());
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // mild excursions concentrate at quiet hours, where a handful of extra
    // purchases moves the rate; expected count stays mild_rate * n
    double idle_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) idle_mean += 1.0 - daily_share(i);
    idle_mean /= static_cast<double>(n);

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = base_conversion_at(c, i);
        if (c.noise_sigma > 0.0) {
            v += c.noise_sigma * gauss(rng);
            const double p = idle_mean > 0.0
                                 ? std::min(c.mild_rate * (1.0 - daily_share(i)) / idle_mean, 1.0)
                                 : c.mild_rate;
            if (c.mild_rate > 0.0 && unit(rng) < p) {
                std::normal_distribution<double> mild_log(
                    std::log(c.mild_scale * c.noise_sigma), c.mild_log_sigma);
                const double sign = unit(rng) < 0.5 ? 1.0 : -1.0;
                v += sign * std::exp(mild_log(rng));
            }
        }
        values[i] = v;
    }

    std::vector<std::uint8_t> labels = inject_outliers(values, c, rng);
    for (double& v : values) v = std::max(v, 0.0);

    LabelledSeries out;
    out.conversion = HourlySeries(c.start_epoch_s, std::move(values));
    out.sessions = generate_sessions(c);
    out.labels = std::move(labels);
    return out;
}

EcomSeries to_ecom_series(const LabelledSeries& data, double basket_value) {
    const std::size_t n = data.conversion.size();
    if (data.sessions.size() != n) {
        throw LengthMismatch("conversion vs sessions", n, data.sessions.size());
    }
    std::vector<double> transactions(n);
    std::vector<double> revenue(n);
    for (std::size_t i = 0; i < n; ++i) {
        transactions[i] = data.conversion.values[i] * data.sessions[i];
        revenue[i] = transactions[i] * basket_value;
    }
    return make_ecom_series(data.conversion.start_epoch_s, data.sessions,
                            std::move(transactions), std::move(revenue));
}

}  // namespace fluidiqr
