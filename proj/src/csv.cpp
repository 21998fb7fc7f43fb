#include "fluidiqr/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fluidiqr/errors.hpp"

namespace fluidiqr {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            out.push_back(line.substr(begin));
            return out;
        }
        out.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_double_field(const std::string& field, const std::string& file,
                          std::size_t line_no, const std::string& column) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || field.empty() || !std::isfinite(v))
        throw UnparsableValue(file, line_no, column);
    return v;
}

struct ColumnIndex {
    std::size_t timestamp = 0;
    std::size_t sessions = 0;
    std::size_t transactions = 0;
    std::optional<std::size_t> revenue;
    std::optional<std::size_t> label;
    std::size_t width = 0;
};

ColumnIndex map_header(const std::string& header_line, const CsvSchema& schema,
                       const std::string& file) {
    const auto names = split_fields(strip_cr(header_line));
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < names.size(); ++i) pos.emplace(names[i], i);

    auto require = [&](const std::string& name) {
        auto it = pos.find(name);
        if (it == pos.end()) throw MissingColumn(file, name);
        return it->second;
    };

    ColumnIndex idx;
    idx.timestamp = require(schema.timestamp);
    idx.sessions = require(schema.sessions);
    idx.transactions = require(schema.transactions);
    if (auto it = pos.find(schema.revenue); it != pos.end()) idx.revenue = it->second;
    if (auto it = pos.find(schema.label); it != pos.end()) idx.label = it->second;
    idx.width = names.size();
    return idx;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyInput(path);
    const ColumnIndex idx = map_header(line, schema, path);

    std::vector<double> sessions;
    std::vector<double> transactions;
    std::vector<double> revenue;
    std::vector<std::uint8_t> labels;
    std::int64_t start_epoch = 0;

    std::size_t line_no = 1;  // header is line 1
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != idx.width)
            throw UnparsableValue(path, line_no, "row");

        std::int64_t epoch = 0;
        try {
            epoch = parse_hour_timestamp(fields[idx.timestamp]);
        } catch (const std::invalid_argument&) {
            throw UnparsableValue(path, line_no, schema.timestamp);
        }
        const std::size_t i = sessions.size();
        if (i == 0) {
            start_epoch = epoch;
        } else if (epoch != start_epoch + static_cast<std::int64_t>(i) * seconds_per_hour) {
            throw NonHourlyGap(path, line_no);
        }

        const double s =
            parse_double_field(fields[idx.sessions], path, line_no, schema.sessions);
        if (s < 0.0) throw NegativeCount(path, line_no, schema.sessions);
        const double t = parse_double_field(fields[idx.transactions], path, line_no,
                                            schema.transactions);
        if (t < 0.0) throw NegativeCount(path, line_no, schema.transactions);
        sessions.push_back(s);
        transactions.push_back(t);

        if (idx.revenue) {
            const double r =
                parse_double_field(fields[*idx.revenue], path, line_no, schema.revenue);
            if (r < 0.0) throw NegativeCount(path, line_no, schema.revenue);
            revenue.push_back(r);
        }
        if (idx.label) {
            const std::string& f = fields[*idx.label];
            if (f == "0")
                labels.push_back(0);
            else if (f == "1")
                labels.push_back(1);
            else
                throw UnparsableValue(path, line_no, schema.label);
        }
    }
    if (sessions.empty()) throw EmptyInput(path);

    IngestResult out{
        make_ecom_series(start_epoch, std::move(sessions), std::move(transactions),
                         idx.revenue ? std::optional(std::move(revenue)) : std::nullopt),
        std::nullopt};
    if (idx.label) out.labels = std::move(labels);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

/** Currency columns keep an explicit decimal part. */
std::string format_money(double v) {
    std::string s = format_double(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
        s += ".00";
    return s;
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path);
}

void write_ecom_csv(const std::string& path, const EcomSeries& series,
                    const std::vector<std::uint8_t>* labels) {
    if (labels && labels->size() != series.size())
        throw LengthMismatch("labels", labels->size(), series.size());

    std::string out = "timestamp,sessions,transactions";
    if (series.revenue) out += ",revenue";
    if (labels) out += ",label";
    out += '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_hour_timestamp(series.start_epoch_s +
                                     static_cast<std::int64_t>(i) * seconds_per_hour);
        out += ',';
        out += format_double(series.sessions[i]);
        out += ',';
        out += format_double(series.transactions[i]);
        if (series.revenue) {
            out += ',';
            out += format_money((*series.revenue)[i]);
        }
        if (labels) {
            out += ',';
            out += (*labels)[i] ? '1' : '0';
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_decomposition_csv(const std::string& path, const Decomposition& fit) {
    std::string out = "timestamp,observed,trend,seasonal24,seasonal168,remainder,robust_weight";
    std::vector<const SeasonalComponent*> extra;
    for (const auto& comp : fit.seasonals)
        if (comp.period != 24 && comp.period != 168) extra.push_back(&comp);
    for (const auto* comp : extra) out += ",seasonal" + std::to_string(comp->period);
    out += '\n';

    const std::vector<double>* s24 = fit.seasonal_for(24);
    const std::vector<double>* s168 = fit.seasonal_for(168);
    for (std::size_t i = 0; i < fit.size(); ++i) {
        out += format_hour_timestamp(fit.start_epoch_s +
                                     static_cast<std::int64_t>(i) * seconds_per_hour);
        out += ',';
        out += format_double(fit.observed[i]);
        out += ',';
        out += format_double(fit.trend[i]);
        out += ',';
        out += format_double(s24 ? (*s24)[i] : 0.0);
        out += ',';
        out += format_double(s168 ? (*s168)[i] : 0.0);
        out += ',';
        out += format_double(fit.remainder[i]);
        out += ',';
        out += format_double(fit.robustness[i]);
        for (const auto* comp : extra) {
            out += ',';
            out += format_double(comp->values[i]);
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

DecompositionTable read_decomposition_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyInput(path);
    const auto names = split_fields(strip_cr(line));
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < names.size(); ++i) pos.emplace(names[i], i);
    auto require = [&](const std::string& name) {
        auto it = pos.find(name);
        if (it == pos.end()) throw MissingColumn(path, name);
        return it->second;
    };
    const std::size_t c_ts = require("timestamp");
    const std::size_t c_obs = require("observed");
    const std::size_t c_trend = require("trend");
    const std::size_t c_s24 = require("seasonal24");
    const std::size_t c_s168 = require("seasonal168");
    const std::size_t c_rem = require("remainder");
    const std::size_t c_w = require("robust_weight");

    DecompositionTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != names.size()) throw UnparsableValue(path, line_no, "row");

        std::int64_t epoch = 0;
        try {
            epoch = parse_hour_timestamp(fields[c_ts]);
        } catch (const std::invalid_argument&) {
            throw UnparsableValue(path, line_no, "timestamp");
        }
        const std::size_t i = table.observed.size();
        if (i == 0) {
            table.start_epoch_s = epoch;
        } else if (epoch !=
                   table.start_epoch_s + static_cast<std::int64_t>(i) * seconds_per_hour) {
            throw NonHourlyGap(path, line_no);
        }
        table.observed.push_back(parse_double_field(fields[c_obs], path, line_no, "observed"));
        table.trend.push_back(parse_double_field(fields[c_trend], path, line_no, "trend"));
        table.seasonal24.push_back(
            parse_double_field(fields[c_s24], path, line_no, "seasonal24"));
        table.seasonal168.push_back(
            parse_double_field(fields[c_s168], path, line_no, "seasonal168"));
        table.remainder.push_back(
            parse_double_field(fields[c_rem], path, line_no, "remainder"));
        table.robust_weight.push_back(
            parse_double_field(fields[c_w], path, line_no, "robust_weight"));
    }
    if (table.observed.empty()) throw EmptyInput(path);
    return table;
}

namespace {

const char* direction_name(FlagDirection d) {
    switch (d) {
        case FlagDirection::low: return "low";
        case FlagDirection::high: return "high";
        default: return "";
    }
}

}  // namespace

void write_report_csv(const std::string& path, const OutlierReport& report,
                      std::int64_t start_epoch_s) {
    std::string out = "timestamp,value,transformed,fence_low,fence_high,w,flag,direction\n";
    for (std::size_t i = 0; i < report.size(); ++i) {
        out += format_hour_timestamp(start_epoch_s +
                                     static_cast<std::int64_t>(i) * seconds_per_hour);
        out += ',';
        out += format_double(report.value[i]);
        out += ',';
        out += format_double(report.transformed[i]);
        out += ',';
        out += format_double(report.fence_low[i]);
        out += ',';
        out += format_double(report.fence_high[i]);
        out += ',';
        out += format_double(report.w[i]);
        out += ',';
        out += report.flag[i] ? '1' : '0';
        out += ',';
        out += direction_name(report.direction[i]);
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_report_json(const std::string& path, const OutlierReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    j["total_flags"] = report.total_flags();
    j["indices"] = report.indices();
    atomic_write_text(path, j.dump(2) + "\n");
}

std::vector<std::uint8_t> read_report_flags(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyInput(path);
    const auto names = split_fields(strip_cr(line));
    std::optional<std::size_t> flag_col;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == "flag") flag_col = i;
    if (!flag_col) throw MissingColumn(path, "flag");

    std::vector<std::uint8_t> flags;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != names.size()) throw UnparsableValue(path, line_no, "row");
        const std::string& f = fields[*flag_col];
        if (f == "0")
            flags.push_back(0);
        else if (f == "1")
            flags.push_back(1);
        else
            throw UnparsableValue(path, line_no, "flag");
    }
    if (flags.empty()) throw EmptyInput(path);
    return flags;
}

namespace {

std::string eval_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

}  // namespace

void write_eval_csv(const std::string& path, const std::vector<EvalRow>& rows) {
    std::string out = "method,total_outliers,accuracy,sensitivity,specificity,tadr\n";
    for (const auto& row : rows) {
        out += row.method;
        out += ',';
        out += std::to_string(row.total_outliers);
        if (row.metrics) {
            out += ',' + eval_cell(row.metrics->accuracy);
            out += ',' + eval_cell(row.metrics->sensitivity);
            out += ',' + eval_cell(row.metrics->specificity);
        } else {
            out += ",NA,NA,NA";
        }
        out += ',' + eval_cell(row.tadr);
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_eval_json(const std::string& path, const std::vector<EvalRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j;
        j["method"] = row.method;
        j["total_outliers"] = row.total_outliers;
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v)
                j[key] = *v;
            else
                j[key] = nullptr;
        };
        if (row.metrics) {
            put("accuracy", row.metrics->accuracy);
            put("sensitivity", row.metrics->sensitivity);
            put("specificity", row.metrics->specificity);
        } else {
            j["accuracy"] = nullptr;
            j["sensitivity"] = nullptr;
            j["specificity"] = nullptr;
        }
        put("tadr", row.tadr);
        arr.push_back(std::move(j));
    }
    atomic_write_text(path, arr.dump(2) + "\n");
}

}  // namespace fluidiqr
