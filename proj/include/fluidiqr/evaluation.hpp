#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluidiqr/detection.hpp"
#include "fluidiqr/timeseries.hpp"

namespace fluidiqr {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

/** Ratios are empty when their denominator is zero (never NaN). */
struct EvalMetrics {
    ConfusionMatrix matrix;
    std::optional<double> accuracy;
    std::optional<double> sensitivity;  // tp / (tp + fn)
    std::optional<double> specificity;  // tn / (tn + fp)
};

EvalMetrics confusion_metrics(const std::vector<std::uint8_t>& labels,
                              const std::vector<std::uint8_t>& flags);

/** Median of the series per hour-of-week slot (168 slots, Sunday 00:00 UTC is
 *  slot 0). Requires at least one observation per slot, in practice length
 *  >= 168. */
std::vector<double> hour_of_week_median(const HourlySeries& series);

/** Total absolute deviation of flagged points from their hour-of-week median:
 *  sum over flagged i of |value_i - slot_median(i)|. Bigger means the flags
 *  sit on commercially unusual hours. */
double tadr(const HourlySeries& series, const std::vector<std::uint8_t>& flags,
            const std::vector<double>& slot_medians);
double tadr(const HourlySeries& series, const std::vector<std::uint8_t>& flags);

enum class Method { twitter, stl, mstl, fluid };

Method method_from_string(const std::string& name);
std::string to_string(Method method);

/** One row of the method comparison. */
struct MethodReport {
    Method method = Method::stl;
    std::size_t total_outliers = 0;
    std::optional<EvalMetrics> metrics;  // when ground-truth labels were given
    std::optional<double> tadr;          // when revenue is available
    OutlierReport report;
};

/** Run the fixed benchmark pipelines over one dataset:
 *    twitter: piecewise-median variant (period 24), outer fence on the raw remainder
 *    stl:     robust single-period fit (24), outer fence on the raw remainder
 *    mstl:    robust multi-period fit (24, 168), outer fence on the raw remainder
 *    fluid:   robust multi-period fit (24, 168), session-weighted fences with
 *             both asinh transforms on
 *  Identical decompositions are computed once and shared. */
std::vector<MethodReport> compare_methods(const EcomSeries& data,
                                          const std::vector<std::uint8_t>* labels,
                                          const std::vector<Method>& methods = {
                                              Method::twitter, Method::stl, Method::mstl,
                                              Method::fluid});

}  // namespace fluidiqr
