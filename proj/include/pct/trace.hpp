#pragma once

// Trace and summary plumbing for the scenario harness.  Traces are CSV
// rows `tick,scope,signal,value` with values rounded to 9 significant
// digits at record time, so metrics recomputed from a parsed trace file
// match the emitted summary exactly.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pct/errors.hpp"

namespace pct {

struct TraceRecord {
    long tick = 0;
    std::string scope;
    std::string signal;
    double value = 0.0;
};

inline std::string format_sig9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

inline double round_sig9(double value) {
    return std::strtod(format_sig9(value).c_str(), nullptr);
}

class TraceSink {
public:
    TraceSink(std::vector<TraceRecord>& records, std::string scope)
        : records_(records), scope_(std::move(scope)) {}

    void emit(long tick, const std::string& signal, double value) {
        records_.push_back({tick, scope_, signal, round_sig9(value)});
    }

    const std::string& scope() const { return scope_; }

private:
    std::vector<TraceRecord>& records_;
    std::string scope_;
};

/// Written once, atomically: the temporary is renamed into place only
/// after all rows are flushed.
inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<TraceRecord>& records) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw config_error("write_trace_csv: cannot open " + tmp.string());
        }
        out << "tick,scope,signal,value\n";
        for (const TraceRecord& record : records) {
            out << record.tick << ',' << record.scope << ',' << record.signal << ','
                << format_sig9(record.value) << '\n';
        }
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("read_trace_csv: cannot open " + path.string());
    }
    std::vector<TraceRecord> records;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        TraceRecord record;
        std::string field;
        std::getline(row, field, ',');
        record.tick = std::stol(field);
        std::getline(row, record.scope, ',');
        std::getline(row, record.signal, ',');
        std::getline(row, field, ',');
        record.value = std::strtod(field.c_str(), nullptr);
        records.push_back(std::move(record));
    }
    return records;
}

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

inline MetricStats compute_stats(const std::vector<double>& values) {
    MetricStats stats;
    stats.count = values.size();
    if (values.empty()) return stats;
    stats.min = values.front();
    stats.max = values.front();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return stats;
}

struct MetricSpec {
    std::string name;
    std::string signal;
    enum class Agg { final_per_scope, all } agg = Agg::all;
};

/// Metrics are pure functions of the (rounded) trace records, so they can
/// be recomputed from a written CSV file bit-for-bit.
inline std::map<std::string, MetricStats> compute_metrics(const std::vector<TraceRecord>& records,
                                                          const std::vector<MetricSpec>& specs) {
    std::map<std::string, MetricStats> metrics;
    for (const MetricSpec& spec : specs) {
        std::vector<double> values;
        if (spec.agg == MetricSpec::Agg::all) {
            for (const TraceRecord& record : records) {
                if (record.signal == spec.signal) values.push_back(record.value);
            }
        } else {
            // Last record per scope, in scope order of first appearance.
            std::vector<std::string> scope_order;
            std::map<std::string, double> last;
            for (const TraceRecord& record : records) {
                if (record.signal != spec.signal) continue;
                if (!last.contains(record.scope)) scope_order.push_back(record.scope);
                last[record.scope] = record.value;
            }
            for (const std::string& scope : scope_order) values.push_back(last[scope]);
        }
        metrics[spec.name] = compute_stats(values);
    }
    return metrics;
}

struct Expectation {
    std::string metric;
    enum class Stat { mean, min, max } stat = Stat::mean;
    enum class Op { lt, le, gt, ge, eq, within } op = Op::eq;
    double value = 0.0;
    double tolerance = 0.0;  // for Op::within

    std::string describe() const {
        static const char* stat_names[] = {"mean", "min", "max"};
        static const char* op_names[] = {"<", "<=", ">", ">=", "==", "within"};
        std::string text = metric;
        text += '.';
        text += stat_names[static_cast<int>(stat)];
        text += ' ';
        text += op_names[static_cast<int>(op)];
        text += ' ';
        text += format_sig9(value);
        if (op == Op::within) {
            text += " +/- ";
            text += format_sig9(tolerance);
        }
        return text;
    }
};

inline bool check_expectation(const std::map<std::string, MetricStats>& metrics,
                              const Expectation& expectation) {
    auto it = metrics.find(expectation.metric);
    if (it == metrics.end() || it->second.count == 0) return false;
    double actual = 0.0;
    switch (expectation.stat) {
        case Expectation::Stat::mean: actual = it->second.mean; break;
        case Expectation::Stat::min: actual = it->second.min; break;
        case Expectation::Stat::max: actual = it->second.max; break;
    }
    switch (expectation.op) {
        case Expectation::Op::lt: return actual < expectation.value;
        case Expectation::Op::le: return actual <= expectation.value;
        case Expectation::Op::gt: return actual > expectation.value;
        case Expectation::Op::ge: return actual >= expectation.value;
        case Expectation::Op::eq: return actual == expectation.value;
        case Expectation::Op::within:
            return std::abs(actual - expectation.value) <= expectation.tolerance;
    }
    return false;
}

}  // namespace pct
