#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fluidiqr {

inline constexpr std::int64_t seconds_per_hour = 3600;

/** Parse a "YYYY-MM-DDTHH:00:00Z" UTC timestamp into epoch seconds.
 *  Throws std::invalid_argument on malformed input or non-zero minutes/seconds. */
std::int64_t parse_hour_timestamp(const std::string& text);

/** Format epoch seconds (must be hour-aligned) as "YYYY-MM-DDTHH:00:00Z". */
std::string format_hour_timestamp(std::int64_t epoch_s);

/** Hour-of-week slot in [0, 168): UTC weekday (Sunday = 0) * 24 + hour of day. */
int hour_of_week(std::int64_t epoch_s);

/** Regular hourly series anchored at a UTC epoch timestamp. */
struct HourlySeries {
    std::int64_t start_epoch_s = 0;  // aligned to a full hour
    std::vector<double> values;

    HourlySeries() = default;
    // Validates: non-empty, hour-aligned start, all values finite.
    HourlySeries(std::int64_t start_epoch_s, std::vector<double> values);

    std::size_t size() const { return values.size(); }
    std::int64_t timestamp_at(std::size_t i) const {
        return start_epoch_s + static_cast<std::int64_t>(i) * seconds_per_hour;
    }
};

/** Aligned hourly e-commerce observations. Sessions and transactions are counts
 *  in normal exports but fractional values are accepted and preserved; synthetic
 *  files rely on that to round-trip exact conversion rates. */
struct EcomSeries {
    std::int64_t start_epoch_s = 0;
    std::vector<double> sessions;
    std::vector<double> transactions;
    std::optional<std::vector<double>> revenue;  // absent => revenue-based scores unavailable
    std::vector<double> conversion;              // derived, see conversion_rate()
    std::vector<std::string> warnings;           // data oddities worth surfacing, not errors

    std::size_t size() const { return sessions.size(); }
    HourlySeries conversion_series() const { return {start_epoch_s, conversion}; }
};

/** Build an EcomSeries, deriving conversion and recording warnings.
 *  Throws LengthMismatch / NegativeCount / EmptyInput on invalid input. */
EcomSeries make_ecom_series(std::int64_t start_epoch_s, std::vector<double> sessions,
                            std::vector<double> transactions,
                            std::optional<std::vector<double>> revenue = std::nullopt);

/** Hourly conversion rate. Zero sessions yield rate 0 by definition; values
 *  above 1 are possible and left untouched. */
double conversion_rate(double transactions, double sessions);

/** Inverse hyperbolic sine, log(x + sqrt(x^2 + 1)). Monotone, odd, and roughly
 *  logarithmic for large |x|, which tames heavy right tails. */
double asinh_transform(double x);
std::vector<double> asinh_transform(const std::vector<double>& xs);

struct Quartiles {
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr() const { return q3 - q1; }
};

/** Quantile of an ascending-sorted sample by linear interpolation between
 *  order statistics at position 1 + (n - 1) * p. */
double quantile_sorted(const std::vector<double>& sorted, double p);

/** First and third quartiles of an unsorted sample (n >= 2, else TooFewPoints). */
Quartiles quartiles(const std::vector<double>& values);

/** Median via the same order-statistic interpolation. Requires n >= 1. */
double median(const std::vector<double>& values);

}  // namespace fluidiqr
