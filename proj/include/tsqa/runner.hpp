#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tsqa/metrics.hpp"

namespace tsqa {

// Per-item metric vector. When rr = 0 the convention is la = 0, hr = 1.
struct EvalRecord {
    std::string item_id;
    double rr = 0.0;
    double ma = 0.0;
    double la = 0.0;
    double hr = 0.0;
    double spq_seconds = 0.0;
    bool la_fallback = true;
    bool hr_fallback = true;
    QueryOutcome outcome;
};

struct MetricAverages {
    double rr = 0.0;
    double ma = 0.0;
    double la = 0.0;
    double hr = 0.0;
    double spq = 0.0;
};

struct SeedReport {
    uint64_t seed = 0;
    std::vector<EvalRecord> records;
    MetricAverages averages;
};

struct RunReport {
    std::string agent_label;
    std::string mode;            // "real" | "stub"
    AgentConfig config;
    bool include_timing = true;
    std::vector<SeedReport> seeds;
    MetricAverages means;        // mean of per-seed averages
    MetricAverages mpe;          // mean percentage error across seeds (0 for 1 seed)
};

MetricAverages average_records(const std::vector<EvalRecord>& records);

// MPE of one metric: 100 * mean_i |x_i - mean| / mean, defined as 0 when the
// mean is 0 or fewer than two seeds ran.
double mean_percentage_error(const std::vector<double>& per_seed_values);

struct RunOptions {
    std::vector<uint64_t> seeds{1};
    bool include_timing = true;
    // Worker threads per seed. Timing runs are forced serial so SPQ stays
    // unpolluted by sibling queries.
    int parallelism = 1;
    Judge* judge = nullptr;
    std::string agent_label;
};

// A backend factory makes one backend per seed (the mock derives its noise
// stream from the seed; an HTTP backend can be shared).
using BackendFactory = std::function<std::unique_ptr<ChatBackend>(uint64_t seed)>;

// Evaluates every item under every seed, scores RR/MA/LA/HR/SPQ, and
// aggregates seed averages with MPE error bars. Per-item failures are
// recorded, never fatal.
RunReport run_benchmark(const std::vector<BenchmarkItem>& items, const ToolRegistry& registry,
                        const ToolRouter& router, const AgentConfig& config,
                        const BackendFactory& make_backend, const RunOptions& options);

// Deterministic renderings. Markdown mirrors the usual results-table layout
// (agent, RR up, MA up, LA up, HR down, SPQ down); TSV carries full-precision
// values that re-parse to the exact averages.
std::string render_markdown(const RunReport& report);
std::string render_tsv(const RunReport& report);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

// Parses the "mean" row of a rendered TSV back into averages.
MetricAverages parse_tsv_means(const std::string& tsv);

void emit_report(const RunReport& report, const std::string& format,
                 const std::filesystem::path& path);

}  // namespace tsqa
