#include "fluidiqr/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "fluidiqr/decomposition.hpp"
#include "fluidiqr/errors.hpp"

namespace fluidiqr {

EvalMetrics confusion_metrics(const std::vector<std::uint8_t>& labels,
                              const std::vector<std::uint8_t>& flags) {
    if (labels.size() != flags.size()) {
        throw LengthMismatch("labels vs flags", labels.size(), flags.size());
    }
    EvalMetrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool truth = labels[i] != 0;
        const bool hit = flags[i] != 0;
        if (truth && hit) ++m.matrix.tp;
        else if (truth) ++m.matrix.fn;
        else if (hit) ++m.matrix.fp;
        else ++m.matrix.tn;
    }
    const auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    const std::size_t total = labels.size();
    m.accuracy = ratio(m.matrix.tp + m.matrix.tn, total);
    m.sensitivity = ratio(m.matrix.tp, m.matrix.tp + m.matrix.fn);
    m.specificity = ratio(m.matrix.tn, m.matrix.tn + m.matrix.fp);
    return m;
}

std::vector<double> hour_of_week_median(const HourlySeries& series) {
    // 168 consecutive hours cover every slot, so length >= 168 suffices
    if (series.size() < 168) throw SeriesTooShort(series.size(), 168);
    std::array<std::vector<double>, 168> slots;
    for (std::size_t i = 0; i < series.size(); ++i) {
        slots[static_cast<std::size_t>(hour_of_week(series.timestamp_at(i)))].push_back(
            series.values[i]);
    }
    std::vector<double> medians(168);
    for (std::size_t s = 0; s < slots.size(); ++s) medians[s] = median(slots[s]);
    return medians;
}

double tadr(const HourlySeries& series, const std::vector<std::uint8_t>& flags,
            const std::vector<double>& slot_medians) {
    if (flags.size() != series.size()) {
        throw LengthMismatch("series vs flags", series.size(), flags.size());
    }
    if (slot_medians.size() != 168) {
        throw LengthMismatch("hour-of-week medians", 168, slot_medians.size());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!flags[i]) continue;
        const int slot = hour_of_week(series.timestamp_at(i));
        total += std::fabs(series.values[i] - slot_medians[static_cast<std::size_t>(slot)]);
    }
    return total;
}

double tadr(const HourlySeries& series, const std::vector<std::uint8_t>& flags) {
    return tadr(series, flags, hour_of_week_median(series));
}

Method method_from_string(const std::string& name) {
    if (name == "twitter") return Method::twitter;
    if (name == "stl") return Method::stl;
    if (name == "mstl") return Method::mstl;
    if (name == "fluid") return Method::fluid;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(Method method) {
    switch (method) {
        case Method::twitter: return "twitter";
        case Method::stl: return "stl";
        case Method::mstl: return "mstl";
        case Method::fluid: return "fluid";
    }
    return "unknown";
}

std::vector<MethodReport> compare_methods(const EcomSeries& data,
                                          const std::vector<std::uint8_t>* labels,
                                          const std::vector<Method>& methods) {
    if (labels && labels->size() != data.size()) {
        throw LengthMismatch("data vs labels", data.size(), labels->size());
    }
    const HourlySeries conversion = data.conversion_series();

    const bool wants_multi =
        std::any_of(methods.begin(), methods.end(),
                    [](Method m) { return m == Method::mstl || m == Method::fluid; });
    StlParams robust_params;
    robust_params.robust = true;

    std::optional<Decomposition> multi;
    if (wants_multi) multi = mstl_fit(conversion, {24, 168}, robust_params);

    const bool with_tadr = data.revenue.has_value() && data.size() >= 168;
    std::optional<std::vector<double>> medians;
    if (with_tadr) {
        medians = hour_of_week_median(HourlySeries(data.start_epoch_s, *data.revenue));
    }

    std::vector<MethodReport> out;
    out.reserve(methods.size());
    for (Method m : methods) {
        OutlierReport rep;
        switch (m) {
            case Method::twitter: {
                const Decomposition fit = twitter_fit(conversion, 24, 336);
                rep = standard_iqr_detect(fit.remainder, 3.0);
                break;
            }
            case Method::stl: {
                const Decomposition fit = stl_fit(conversion, 24, robust_params);
                rep = standard_iqr_detect(fit.remainder, 3.0);
                break;
            }
            case Method::mstl: {
                rep = standard_iqr_detect(multi->remainder, 3.0);
                break;
            }
            case Method::fluid: {
                rep = fluid_iqr_detect(multi->remainder, data.sessions, FenceConfig{});
                break;
            }
        }
        MethodReport row;
        row.method = m;
        row.total_outliers = rep.total_flags();
        if (labels) row.metrics = confusion_metrics(*labels, rep.flag);
        if (with_tadr) {
            row.tadr = tadr(HourlySeries(data.start_epoch_s, *data.revenue), rep.flag, *medians);
        }
        row.report = std::move(rep);
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace fluidiqr
