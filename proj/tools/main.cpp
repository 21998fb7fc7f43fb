#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluidiqr/csv.hpp"
#include "fluidiqr/decomposition.hpp"
#include "fluidiqr/detection.hpp"
#include "fluidiqr/errors.hpp"
#include "fluidiqr/evaluation.hpp"
#include "fluidiqr/synth.hpp"
#include "fluidiqr/timeseries.hpp"

namespace {

using namespace fluidiqr;

/** Bad flag combinations detected after parsing; mapped to exit code 2. */
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string sig6_or_na(const std::optional<double>& v) {
    return v ? sig6(*v) : std::string("NA");
}

// ---- shared decomposition flags ----

struct DecompFlags {
    std::string method = "mstl";
    bool robust = true;
    std::vector<int> periods;
    int median_span = 336;
    int seasonal_window = 0;
    int trend_window = 0;
    int lowpass_window = 0;
    int inner_iterations = 0;
    int outer_iterations = -1;
    bool periodic_seasonal = false;
};

void add_decomp_flags(CLI::App* cmd, DecompFlags& f) {
    cmd->add_option("--method", f.method, "decomposition method")
        ->transform(CLI::IsMember({"stl", "twitter", "mstl"}))
        ->capture_default_str();
    cmd->add_flag("--robust,!--no-robust", f.robust,
                  "bisquare outer loop for stl/mstl (default on)");
    cmd->add_option("--periods", f.periods,
                    "seasonal periods in hours (default 24 for stl/twitter, 24,168 for mstl)")
        ->delimiter(',');
    cmd->add_option("--median-span", f.median_span,
                    "trend block length for the piecewise-median method")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seasonal-window", f.seasonal_window,
                    "seasonal loess window, odd (0 = default 169)");
    cmd->add_option("--trend-window", f.trend_window,
                    "trend loess window, odd (0 = derive from period)");
    cmd->add_option("--lowpass-window", f.lowpass_window,
                    "low-pass loess window, odd (0 = derive from period)");
    cmd->add_option("--inner", f.inner_iterations, "inner iterations (0 = default)");
    cmd->add_option("--outer", f.outer_iterations, "robustness iterations (-1 = default)");
    cmd->add_flag("--periodic-seasonal", f.periodic_seasonal,
                  "force one constant seasonal value per cycle position");
}

Decomposition run_decomposition(const DecompFlags& f, const HourlySeries& series) {
    std::vector<int> periods = f.periods;
    if (f.method == "twitter") {
        if (periods.empty()) periods = {24};
        if (periods.size() != 1)
            throw UsageError("the twitter method takes a single period");
        return twitter_fit(series, periods[0], f.median_span);
    }

    StlParams params;
    params.seasonal_window = f.seasonal_window;
    params.trend_window = f.trend_window;
    params.lowpass_window = f.lowpass_window;
    params.inner_iterations = f.inner_iterations;
    params.outer_iterations = f.outer_iterations;
    params.periodic_seasonal = f.periodic_seasonal;
    params.robust = f.robust;

    if (f.method == "stl") {
        if (periods.empty()) periods = {24};
        if (periods.size() != 1)
            throw UsageError("stl takes a single period; use --method mstl for several");
        return stl_fit(series, periods[0], params);
    }
    if (periods.empty()) periods = {24, 168};
    for (std::size_t i = 0; i + 1 < periods.size(); ++i)
        if (periods[i] >= periods[i + 1])
            throw UsageError("--periods must be strictly ascending");
    return mstl_fit(series, periods, params);
}

std::string periods_label(const Decomposition& fit) {
    std::string out;
    for (const auto& comp : fit.seasonals) {
        if (!out.empty()) out += ',';
        out += std::to_string(comp.period);
    }
    return out;
}

// ---- synth ----

struct SynthFlags {
    SynthConfig cfg;
    std::string profile = "d3";
    std::string start = "2017-05-01T00:00:00Z";
    std::string out;
};

void write_synth_sidecar(const std::string& path, const SynthConfig& cfg) {
    nlohmann::json j;
    j["profile"] = to_string(cfg.profile);
    j["days"] = cfg.days;
    j["seed"] = cfg.seed;
    j["start"] = format_hour_timestamp(cfg.start_epoch_s);
    j["daily_amplitude"] = cfg.daily_amplitude;
    j["weekly_amplitude"] = cfg.weekly_amplitude;
    j["trend_amplitude"] = cfg.trend_amplitude;
    j["noise_sigma"] = cfg.noise_sigma;
    j["outlier_rate"] = cfg.outlier_rate;
    j["spike_scale"] = cfg.spike_scale;
    j["spike_log_sigma"] = cfg.spike_log_sigma;
    j["spike_up_probability"] = cfg.spike_up_probability;
    j["spike_placement_floor"] = cfg.spike_placement_floor;
    j["mild_rate"] = cfg.mild_rate;
    j["mild_scale"] = cfg.mild_scale;
    j["mild_log_sigma"] = cfg.mild_log_sigma;
    j["sessions_daily"] = cfg.sessions_daily;
    j["sessions_weekly"] = cfg.sessions_weekly;
    j["sessions_trend"] = cfg.sessions_trend;
    j["sessions_sigma"] = cfg.sessions_sigma;
    j["basket_value"] = cfg.basket_value;
    atomic_write_text(path, j.dump(2) + "\n");
}

int run_synth(SynthFlags& f) {
    f.cfg.profile = profile_from_string(f.profile);
    try {
        f.cfg.start_epoch_s = parse_hour_timestamp(f.start);
    } catch (const std::invalid_argument&) {
        throw UsageError("--start must be an hour timestamp like 2017-05-01T00:00:00Z");
    }

    const LabelledSeries data = generate_series(f.cfg);
    const EcomSeries ecom = to_ecom_series(data, f.cfg.basket_value);
    write_ecom_csv(f.out, ecom, &data.labels);
    write_synth_sidecar(f.out + ".json", f.cfg);

    std::size_t labelled = 0;
    for (auto v : data.labels) labelled += v;
    std::printf("synth profile=%s hours=%d outliers=%zu out=%s\n",
                to_string(f.cfg.profile).c_str(), f.cfg.hours(), labelled, f.out.c_str());
    return 0;
}

// ---- decompose ----

struct DecomposeFlags {
    std::string input;
    std::string out;
    DecompFlags decomp;
};

int run_decompose(const DecomposeFlags& f) {
    const IngestResult ing = ingest_csv(f.input);
    const Decomposition fit = run_decomposition(f.decomp, ing.series.conversion_series());
    write_decomposition_csv(f.out, fit);

    double max_abs_rem = 0.0;
    for (double r : fit.remainder) max_abs_rem = std::max(max_abs_rem, std::fabs(r));
    std::printf("decompose method=%s n=%zu periods=%s max_abs_remainder=%s out=%s\n",
                to_string(fit.method).c_str(), fit.size(), periods_label(fit).c_str(),
                sig6(max_abs_rem).c_str(), f.out.c_str());
    return 0;
}

// ---- detect ----

struct DetectFlags {
    std::string input;
    std::string decomposition;
    std::string out;
    std::string json;
    std::string fence = "fluid";
    double w_low = 3.0;
    double w_high = 1.5;
    bool asinh_remainder = true;
    bool asinh_sessions = true;
    CLI::Option* asinh_remainder_opt = nullptr;
    CLI::Option* asinh_sessions_opt = nullptr;
    DecompFlags decomp;
};

FenceMode fence_from_string(const std::string& name) {
    if (name == "inner") return FenceMode::standard_inner;
    if (name == "outer") return FenceMode::standard_outer;
    return FenceMode::fluid;
}

int run_detect(const DetectFlags& f) {
    const IngestResult ing = ingest_csv(f.input);

    std::vector<double> remainder;
    std::int64_t start_epoch = ing.series.start_epoch_s;
    if (!f.decomposition.empty()) {
        DecompositionTable table = read_decomposition_csv(f.decomposition);
        if (table.size() != ing.series.size())
            throw LengthMismatch("observations vs decomposition rows", ing.series.size(),
                                 table.size());
        remainder = std::move(table.remainder);
        start_epoch = table.start_epoch_s;
    } else {
        Decomposition fit = run_decomposition(f.decomp, ing.series.conversion_series());
        remainder = std::move(fit.remainder);
    }

    FenceConfig fc;
    fc.mode = fence_from_string(f.fence);
    fc.w_low_activity = f.w_low;
    fc.w_high_activity = f.w_high;
    // standard fences default to the raw remainder, fluid to the asinh scale
    const bool remainder_default = fc.mode == FenceMode::fluid;
    fc.transform_remainder =
        f.asinh_remainder_opt->count() ? f.asinh_remainder : remainder_default;
    fc.transform_sessions = f.asinh_sessions_opt->count() ? f.asinh_sessions : true;

    const std::vector<double>* sessions =
        fc.mode == FenceMode::fluid ? &ing.series.sessions : nullptr;
    const OutlierReport report = detect_outliers(remainder, sessions, fc);

    write_report_csv(f.out, report, start_epoch);
    if (!f.json.empty()) write_report_json(f.json, report);
    std::printf("detect fence=%s n=%zu flags=%zu out=%s\n", report.method.c_str(),
                report.size(), report.total_flags(), f.out.c_str());
    return 0;
}

// ---- eval ----

struct EvalFlags {
    std::string input;
    std::string report;
    std::string out;
    std::string json;
    std::string name = "detector";
};

int run_eval(const EvalFlags& f) {
    const IngestResult ing = ingest_csv(f.input);
    const std::vector<std::uint8_t> flags = read_report_flags(f.report);
    if (flags.size() != ing.series.size())
        throw LengthMismatch("observations vs report flags", ing.series.size(), flags.size());

    EvalRow row;
    row.method = f.name;
    for (auto v : flags) row.total_outliers += v;
    if (ing.labels) row.metrics = confusion_metrics(*ing.labels, flags);
    if (ing.series.revenue && ing.series.size() >= 168) {
        row.tadr = tadr(HourlySeries(ing.series.start_epoch_s, *ing.series.revenue), flags);
    }

    write_eval_csv(f.out, {row});
    if (!f.json.empty()) write_eval_json(f.json, {row});

    std::printf("eval name=%s flags=%zu", f.name.c_str(), row.total_outliers);
    if (row.metrics) {
        std::printf(" accuracy=%s sensitivity=%s specificity=%s",
                    sig6_or_na(row.metrics->accuracy).c_str(),
                    sig6_or_na(row.metrics->sensitivity).c_str(),
                    sig6_or_na(row.metrics->specificity).c_str());
    }
    if (row.tadr) std::printf(" tadr=%s", sig6(*row.tadr).c_str());
    std::printf(" out=%s\n", f.out.c_str());
    return 0;
}

// ---- compare ----

struct CompareFlags {
    std::string input;
    std::string labels;
    std::vector<std::string> methods{"twitter", "stl", "mstl", "fluid"};
    std::string out;
    std::string json;
};

int run_compare(const CompareFlags& f) {
    const IngestResult ing = ingest_csv(f.input);

    std::optional<std::vector<std::uint8_t>> labels;
    if (!f.labels.empty()) {
        labels = f.labels == f.input ? ing.labels : ingest_csv(f.labels).labels;
        if (!labels) throw MissingColumn(f.labels, "label");
    }

    std::vector<Method> methods;
    for (const auto& name : f.methods) methods.push_back(method_from_string(name));

    const std::vector<MethodReport> table =
        compare_methods(ing.series, labels ? &*labels : nullptr, methods);

    std::vector<EvalRow> rows;
    rows.reserve(table.size());
    for (const auto& rep : table) {
        rows.push_back({to_string(rep.method), rep.total_outliers, rep.metrics, rep.tadr});
    }
    write_eval_csv(f.out, rows);
    if (!f.json.empty()) write_eval_json(f.json, rows);

    std::printf("%-8s %10s %10s %12s %12s %12s\n", "method", "outliers", "accuracy",
                "sensitivity", "specificity", "tadr");
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        std::printf("%-8s %10zu %10s %12s %12s %12s\n", row.method.c_str(),
                    row.total_outliers,
                    m ? sig6_or_na(m->accuracy).c_str() : "NA",
                    m ? sig6_or_na(m->sensitivity).c_str() : "NA",
                    m ? sig6_or_na(m->specificity).c_str() : "NA",
                    sig6_or_na(row.tadr).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "seasonal decomposition and session-weighted IQR outlier detection "
        "for hourly e-commerce series"};
    app.require_subcommand(1);

    SynthFlags synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a labelled synthetic dataset");
    synth_cmd->add_option("--profile", synth.profile, "dataset profile")
        ->transform(CLI::IsMember({"d1", "d2", "d3"}))
        ->capture_default_str();
    synth_cmd->add_option("--days", synth.cfg.days, "number of days")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.cfg.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--start", synth.start, "first hour timestamp (UTC)")
        ->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "output CSV path (JSON sidecar written next to it)")
        ->required();
    synth_cmd->add_option("--daily", synth.cfg.daily_amplitude, "daily seasonal amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--weekly", synth.cfg.weekly_amplitude, "weekly seasonal amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--trend", synth.cfg.trend_amplitude, "total linear trend rise")
        ->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth.cfg.noise_sigma, "Gaussian noise sigma")
        ->capture_default_str();
    synth_cmd->add_option("--outlier-rate", synth.cfg.outlier_rate, "labelled outlier share")
        ->capture_default_str();
    synth_cmd->add_option("--spike-scale", synth.cfg.spike_scale,
                          "median spike size in noise-sigma units")
        ->capture_default_str();
    synth_cmd->add_option("--basket-value", synth.cfg.basket_value, "revenue per transaction")
        ->capture_default_str();

    DecomposeFlags dec;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "fit trend and seasonal components");
    dec_cmd->add_option("--input", dec.input, "observations CSV")->required();
    dec_cmd->add_option("--out", dec.out, "decomposition CSV path")->required();
    add_decomp_flags(dec_cmd, dec.decomp);

    DetectFlags det;
    CLI::App* det_cmd = app.add_subcommand("detect", "flag remainder outliers");
    det_cmd->add_option("--input", det.input, "observations CSV")->required();
    det_cmd->add_option("--decomposition", det.decomposition,
                        "reuse a decomposition CSV instead of fitting");
    det_cmd->add_option("--out", det.out, "report CSV path")->required();
    det_cmd->add_option("--json", det.json, "also write a JSON summary here");
    det_cmd->add_option("--fence", det.fence, "fence rule")
        ->transform(CLI::IsMember({"inner", "outer", "fluid"}))
        ->capture_default_str();
    det_cmd->add_option("--w-low", det.w_low, "fluid multiplier at the quietest hour")
        ->capture_default_str();
    det_cmd->add_option("--w-high", det.w_high, "fluid multiplier at the busiest hour")
        ->capture_default_str();
    det.asinh_remainder_opt =
        det_cmd->add_flag("--asinh-remainder,!--no-asinh-remainder", det.asinh_remainder,
                          "asinh the remainder before quartiles (default: fluid on, others off)");
    det.asinh_sessions_opt =
        det_cmd->add_flag("--asinh-sessions,!--no-asinh-sessions", det.asinh_sessions,
                          "asinh session counts before scaling w (default on)");
    add_decomp_flags(det_cmd, det.decomp);

    EvalFlags ev;
    CLI::App* ev_cmd = app.add_subcommand("eval", "score a detection report against labels");
    ev_cmd->add_option("--input", ev.input, "observations CSV with label/revenue columns")
        ->required();
    ev_cmd->add_option("--report", ev.report, "detection report CSV")->required();
    ev_cmd->add_option("--out", ev.out, "evaluation CSV path")->required();
    ev_cmd->add_option("--json", ev.json, "also write a JSON summary here");
    ev_cmd->add_option("--name", ev.name, "row label for the method column")
        ->capture_default_str();

    CompareFlags cmp;
    CLI::App* cmp_cmd = app.add_subcommand("compare", "run the benchmark method pipelines");
    cmp_cmd->add_option("--input", cmp.input, "observations CSV")->required();
    cmp_cmd->add_option("--labels", cmp.labels,
                        "CSV holding the ground-truth label column (may equal --input)");
    cmp_cmd->add_option("--methods", cmp.methods, "methods to run")
        ->delimiter(',')
        ->transform(CLI::IsMember({"twitter", "stl", "mstl", "fluid"}))
        ->capture_default_str();
    cmp_cmd->add_option("--out", cmp.out, "summary CSV path")->required();
    cmp_cmd->add_option("--json", cmp.json, "also write a JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    try {
        if (*synth_cmd) return run_synth(synth);
        if (*dec_cmd) return run_decompose(dec);
        if (*det_cmd) return run_detect(det);
        if (*ev_cmd) return run_eval(ev);
        if (*cmp_cmd) return run_compare(cmp);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
