#include "fluidiqr/timeseries.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fluidiqr/errors.hpp"

namespace fluidiqr {

namespace {

bool all_finite(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::int64_t parse_hour_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char tail = '\0';
    // strict layout: YYYY-MM-DDTHH:MM:SSZ with nothing trailing
    if (text.size() != 20 ||
        std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s,
                    &tail) != 7 ||
        tail != 'Z') {
        throw std::invalid_argument("malformed timestamp '" + text + "'");
    }
    if (mi != 0 || s != 0 || h < 0 || h > 23) {
        throw std::invalid_argument("timestamp '" + text + "' is not aligned to a full hour");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("timestamp '" + text + "' has an invalid calendar date");
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + static_cast<std::int64_t>(h) * 3600;
}

std::string format_hour_timestamp(std::int64_t epoch_s) {
    if (epoch_s % seconds_per_hour != 0) {
        throw std::invalid_argument("timestamp is not aligned to a full hour");
    }
    // floor division so dates before 1970 format correctly too
    std::int64_t days = epoch_s / 86400;
    std::int64_t rem = epoch_s % 86400;
    if (rem < 0) {
        days -= 1;
        rem += 86400;
    }
    const auto ymd = std::chrono::year_month_day{
        std::chrono::sys_days{std::chrono::days{days}}};
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:00:00Z", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600));
    return buf;
}

int hour_of_week(std::int64_t epoch_s) {
    std::int64_t days = epoch_s / 86400;
    std::int64_t rem = epoch_s % 86400;
    if (rem < 0) {
        days -= 1;
        rem += 86400;
    }
    const int weekday = static_cast<int>(((days % 7) + 7 + 4) % 7);  // epoch day 0 is a Thursday
    return weekday * 24 + static_cast<int>(rem / 3600);
}

HourlySeries::HourlySeries(std::int64_t start, std::vector<double> vals)
    : start_epoch_s(start), values(std::move(vals)) {
    if (values.empty()) throw EmptyInput("hourly series must contain at least one value");
    if (start_epoch_s % seconds_per_hour != 0) {
        throw std::invalid_argument("series start is not aligned to a full hour");
    }
    if (!all_finite(values)) throw std::invalid_argument("series contains a non-finite value");
}

double conversion_rate(double transactions, double sessions) {
    if (sessions == 0.0) return 0.0;
    return transactions / sessions;
}

EcomSeries make_ecom_series(std::int64_t start_epoch_s, std::vector<double> sessions,
                            std::vector<double> transactions,
                            std::optional<std::vector<double>> revenue) {
    if (sessions.empty()) throw EmptyInput("e-commerce series must contain at least one row");
    if (sessions.size() != transactions.size()) {
        throw LengthMismatch("sessions vs transactions", sessions.size(), transactions.size());
    }
    if (revenue && revenue->size() != sessions.size()) {
        throw LengthMismatch("sessions vs revenue", sessions.size(), revenue->size());
    }
    EcomSeries out;
    out.start_epoch_s = start_epoch_s;
    out.sessions = std::move(sessions);
    out.transactions = std::move(transactions);
    out.revenue = std::move(revenue);
    out.conversion.resize(out.sessions.size());
    for (std::size_t i = 0; i < out.sessions.size(); ++i) {
        const double s = out.sessions[i];
        const double t = out.transactions[i];
        if (!std::isfinite(s) || !std::isfinite(t) ||
            (out.revenue && !std::isfinite((*out.revenue)[i]))) {
            throw std::invalid_argument("non-finite value at row " + std::to_string(i));
        }
        if (s < 0.0 || t < 0.0 || (out.revenue && (*out.revenue)[i] < 0.0)) {
            throw NegativeCount("<memory>", i, s < 0.0 ? "sessions" : t < 0.0 ? "transactions"
                                                                               : "revenue");
        }
        out.conversion[i] = conversion_rate(t, s);
        if (s == 0.0 && t > 0.0) {
            out.warnings.push_back("row " + std::to_string(i) +
                                   ": transactions without sessions, conversion set to 0");
        } else if (out.conversion[i] > 1.0) {
            out.warnings.push_back("row " + std::to_string(i) + ": conversion rate exceeds 1");
        }
    }
    return out;
}

double asinh_transform(double x) { return std::asinh(x); }

std::vector<double> asinh_transform(const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(),
                   [](double x) { return std::asinh(x); });
    return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw TooFewPoints("quantile of an empty sample");
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    // position 1 + (n - 1) p in 1-based order statistics
    const double pos = 1.0 + static_cast<double>(n - 1) * p;
    const double fl = std::floor(pos);
    std::size_t lo = static_cast<std::size_t>(fl) - 1;
    if (lo >= n - 1) return sorted[n - 1];
    const double frac = pos - fl;
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw TooFewPoints("quartiles need at least two observations, got " +
                           std::to_string(values.size()));
    }
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    return {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.75)};
}

double median(const std::vector<double>& values) {
    if (values.empty()) throw TooFewPoints("median of an empty sample");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, 0.5);
}

}  // namespace fluidiqr
