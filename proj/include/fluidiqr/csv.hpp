#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluidiqr/decomposition.hpp"
#include "fluidiqr/detection.hpp"
#include "fluidiqr/evaluation.hpp"
#include "fluidiqr/timeseries.hpp"

namespace fluidiqr {

/** Column-name mapping for observation files. */
struct CsvSchema {
    std::string timestamp = "timestamp";
    std::string sessions = "sessions";
    std::string transactions = "transactions";
    std::string revenue = "revenue";  // optional in the file
    std::string label = "label";      // optional in the file
};

struct IngestResult {
    EcomSeries series;
    std::optional<std::vector<std::uint8_t>> labels;
};

/** Read an hourly observations CSV. Enforces the contiguous hourly grid and
 *  non-negative counts; errors name the file, physical line and column.
 *  Rows must arrive sorted; no imputation is performed. */
IngestResult ingest_csv(const std::string& path, const CsvSchema& schema = {});

void write_ecom_csv(const std::string& path, const EcomSeries& series,
                    const std::vector<std::uint8_t>* labels = nullptr);

void write_decomposition_csv(const std::string& path, const Decomposition& fit);

/** Decomposition CSV read back as plain columns. */
struct DecompositionTable {
    std::int64_t start_epoch_s = 0;
    std::vector<double> observed;
    std::vector<double> trend;
    std::vector<double> seasonal24;
    std::vector<double> seasonal168;
    std::vector<double> remainder;
    std::vector<double> robust_weight;
    std::size_t size() const { return observed.size(); }
};

DecompositionTable read_decomposition_csv(const std::string& path);

void write_report_csv(const std::string& path, const OutlierReport& report,
                      std::int64_t start_epoch_s);
void write_report_json(const std::string& path, const OutlierReport& report);

/** Flag column of a previously written detection report. */
std::vector<std::uint8_t> read_report_flags(const std::string& path);

/** One line of an evaluation summary table. */
struct EvalRow {
    std::string method;
    std::size_t total_outliers = 0;
    std::optional<EvalMetrics> metrics;
    std::optional<double> tadr;
};

void write_eval_csv(const std::string& path, const std::vector<EvalRow>& rows);
void write_eval_json(const std::string& path, const std::vector<EvalRow>& rows);

/** Write content to a temporary sibling file, then rename over the target, so
 *  readers never observe a half-written file. */
void atomic_write_text(const std::string& path, const std::string& content);

/** Shortest decimal form that parses back to exactly the same double. */
std::string format_double(double v);

}  // namespace fluidiqr
