#include "tsqa/runner.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

std::string full_precision(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

MetricAverages average_records(const std::vector<EvalRecord>& records) {
    MetricAverages avg;
    if (records.empty()) return avg;
    for (const auto& r : records) {
        avg.rr += r.rr;
        avg.ma += r.ma;
        avg.la += r.la;
        avg.hr += r.hr;
        avg.spq += r.spq_seconds;
    }
    const auto n = static_cast<double>(records.size());
    avg.rr /= n;
    avg.ma /= n;
    avg.la /= n;
    avg.hr /= n;
    avg.spq /= n;
    return avg;
}

double mean_percentage_error(const std::vector<double>& per_seed_values) {
    if (per_seed_values.size() < 2) return 0.0;
    double mean = 0.0;
    for (const double v : per_seed_values) mean += v;
    mean /= static_cast<double>(per_seed_values.size());
    if (mean == 0.0) return 0.0;
    double spread = 0.0;
    for (const double v : per_seed_values) spread += std::abs(v - mean) / mean;
    return 100.0 * spread / static_cast<double>(per_seed_values.size());
}

namespace {

EvalRecord evaluate_item(AgentContext& ctx, const BenchmarkItem& item,
                         const ToolRegistry& registry, Judge* judge, bool include_timing) {
    EvalRecord record;
    record.item_id = item.item_id;
    record.outcome = answer(ctx, item.nlq, item.item_id);
    if (!include_timing) record.outcome.wall_seconds = 0.0;  // keep report bytes reproducible
    record.spq_seconds = record.outcome.wall_seconds;
    record.rr = metric_rr(record.outcome);
    record.ma = metric_ma(record.outcome, item, registry);
    if (record.rr == 1.0) {
        const JudgedScore la = metric_la(record.outcome, item, judge);
        const JudgedScore hr = metric_hr(record.outcome, item, judge);
        record.la = la.score;
        record.la_fallback = la.used_fallback;
        record.hr = hr.score;
        record.hr_fallback = hr.used_fallback;
    } else {
        record.la = 0.0;  // pessimistic convention for failed items
        record.hr = 1.0;
    }
    return record;
}

}  // namespace

RunReport run_benchmark(const std::vector<BenchmarkItem>& items, const ToolRegistry& registry,
                        const ToolRouter& router, const AgentConfig& config,
                        const BackendFactory& make_backend, const RunOptions& options) {
    if (options.seeds.empty()) throw usage_error("benchmark run needs at least one seed");

    RunReport report;
    report.mode = to_string(router.mode());
    report.config = config;
    report.include_timing = options.include_timing;

    for (const uint64_t seed : options.seeds) {
        std::unique_ptr<ChatBackend> backend = make_backend(seed);
        if (report.agent_label.empty())
            report.agent_label =
                options.agent_label.empty() ? backend->name() : options.agent_label;

        AgentConfig seed_config = config;
        seed_config.seed = seed;

        SeedReport seed_report;
        seed_report.seed = seed;
        seed_report.records.resize(items.size());

        // SPQ is only meaningful when queries run one at a time.
        const int workers =
            options.include_timing ? 1 : std::max(1, options.parallelism);
        if (workers == 1) {
            AgentContext ctx{backend.get(), &registry, router, seed_config};
            for (size_t i = 0; i < items.size(); ++i)
                seed_report.records[i] = evaluate_item(ctx, items[i], registry, options.judge,
                                                       options.include_timing);
        } else {
            std::atomic<size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(static_cast<size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    AgentContext ctx{backend.get(), &registry, router, seed_config};
                    for (;;) {
                        const size_t i = next.fetch_add(1);
                        if (i >= items.size()) return;
                        seed_report.records[i] = evaluate_item(
                            ctx, items[i], registry, options.judge, options.include_timing);
                    }
                });
            }
            for (auto& t : pool) t.join();
        }

        seed_report.averages = average_records(seed_report.records);
        report.seeds.push_back(std::move(seed_report));
    }

    auto collect = [&](auto member) {
        std::vector<double> values;
        for (const auto& s : report.seeds) values.push_back(s.averages.*member);
        return values;
    };
    auto mean_of = [](const std::vector<double>& values) {
        double sum = 0.0;
        for (const double v : values) sum += v;
        return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    };
    const auto rr = collect(&MetricAverages::rr);
    const auto ma = collect(&MetricAverages::ma);
    const auto la = collect(&MetricAverages::la);
    const auto hr = collect(&MetricAverages::hr);
    const auto spq = collect(&MetricAverages::spq);
    report.means = {mean_of(rr), mean_of(ma), mean_of(la), mean_of(hr), mean_of(spq)};
    report.mpe = {mean_percentage_error(rr), mean_percentage_error(ma),
                  mean_percentage_error(la), mean_percentage_error(hr),
                  mean_percentage_error(spq)};
    return report;
}

std::string render_markdown(const RunReport& report) {
    std::string out;
    out += "| agent | RR \xE2\x86\x91 | MA \xE2\x86\x91 | LA \xE2\x86\x91 | HR \xE2\x86\x93 |";
    if (report.include_timing) out += " SPQ \xE2\x86\x93 |";
    out += "\n|---|---|---|---|---|";
    if (report.include_timing) out += "---|";
    out += "\n| " + report.agent_label + " | " + two_decimals(report.means.rr) + " | " +
           two_decimals(report.means.ma) + " | " + two_decimals(report.means.la) + " | " +
           two_decimals(report.means.hr) + " |";
    if (report.include_timing) out += " " + two_decimals(report.means.spq) + " |";
    out += "\n";
    if (report.seeds.size() > 1) {
        out += "| MPE % | " + two_decimals(report.mpe.rr) + " | " + two_decimals(report.mpe.ma) +
               " | " + two_decimals(report.mpe.la) + " | " + two_decimals(report.mpe.hr) + " |";
        if (report.include_timing) out += " " + two_decimals(report.mpe.spq) + " |";
        out += "\n";
    }
    return out;
}

namespace {

void append_tsv_row(std::string& out, const std::string& label, const MetricAverages& m,
                    bool include_timing) {
    out += label;
    out += '\t';
    out += full_precision(m.rr);
    out += '\t';
    out += full_precision(m.ma);
    out += '\t';
    out += full_precision(m.la);
    out += '\t';
    out += full_precision(m.hr);
    if (include_timing) {
        out += '\t';
        out += full_precision(m.spq);
    }
    out += '\n';
}

}  // namespace

std::string render_tsv(const RunReport& report) {
    std::string out = "row\trr\tma\tla\thr";
    if (report.include_timing) out += "\tspq";
    out += "\n";
    for (const auto& seed : report.seeds)
        append_tsv_row(out, "seed:" + std::to_string(seed.seed), seed.averages,
                       report.include_timing);
    append_tsv_row(out, "mean", report.means, report.include_timing);
    if (report.seeds.size() > 1) append_tsv_row(out, "mpe", report.mpe, report.include_timing);
    return out;
}

namespace {

nlohmann::json averages_to_json(const MetricAverages& m) {
    return {{"rr", m.rr}, {"ma", m.ma}, {"la", m.la}, {"hr", m.hr}, {"spq", m.spq}};
}

MetricAverages averages_from_json(const nlohmann::json& j) {
    MetricAverages m;
    m.rr = j.value("rr", 0.0);
    m.ma = j.value("ma", 0.0);
    m.la = j.value("la", 0.0);
    m.hr = j.value("hr", 0.0);
    m.spq = j.value("spq", 0.0);
    return m;
}

nlohmann::json config_to_json(const AgentConfig& c) {
    return {{"temperature", c.temperature},
            {"seed", c.seed},
            {"context_budget_tokens", c.context_budget_tokens},
            {"max_generated_tokens", c.max_generated_tokens},
            {"transport_retries", c.transport_retries},
            {"empty_output_retries", c.empty_output_retries},
            {"max_tool_rounds", c.max_tool_rounds},
            {"endpoint", c.endpoint},
            {"model", c.model},
            {"credential_env", c.credential_env}};
}

AgentConfig config_from_json(const nlohmann::json& j) {
    AgentConfig c;
    c.temperature = j.value("temperature", 0.0);
    c.seed = j.value("seed", uint64_t{1});
    c.context_budget_tokens = j.value("context_budget_tokens", 8192);
    c.max_generated_tokens = j.value("max_generated_tokens", 512);
    c.transport_retries = j.value("transport_retries", 2);
    c.empty_output_retries = j.value("empty_output_retries", 5);
    c.max_tool_rounds = j.value("max_tool_rounds", 4);
    c.endpoint = j.value("endpoint", "");
    c.model = j.value("model", "");
    c.credential_env = j.value("credential_env", "");
    return c;
}

}  // namespace

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& seed : report.seeds) {
        nlohmann::json records = nlohmann::json::array();
        for (const auto& r : seed.records) {
            nlohmann::json jr{{"item_id", r.item_id}, {"rr", r.rr},
                              {"ma", r.ma},           {"la", r.la},
                              {"hr", r.hr},           {"la_fallback", r.la_fallback},
                              {"hr_fallback", r.hr_fallback},
                              {"outcome", r.outcome}};
            if (report.include_timing) jr["spq_seconds"] = r.spq_seconds;
            records.push_back(std::move(jr));
        }
        seeds.push_back({{"seed", seed.seed},
                         {"averages", averages_to_json(seed.averages)},
                         {"records", std::move(records)}});
    }
    return {{"agent_label", report.agent_label},
            {"mode", report.mode},
            {"config", config_to_json(report.config)},
            {"include_timing", report.include_timing},
            {"seeds", std::move(seeds)},
            {"means", averages_to_json(report.means)},
            {"mpe", averages_to_json(report.mpe)}};
}

RunReport report_from_json(const nlohmann::json& j) {
    RunReport report;
    report.agent_label = j.value("agent_label", "");
    report.mode = j.value("mode", "stub");
    report.config = config_from_json(j.value("config", nlohmann::json::object()));
    report.include_timing = j.value("include_timing", true);
    for (const auto& js : j.value("seeds", nlohmann::json::array())) {
        SeedReport seed;
        seed.seed = js.value("seed", uint64_t{0});
        seed.averages = averages_from_json(js.value("averages", nlohmann::json::object()));
        for (const auto& jr : js.value("records", nlohmann::json::array())) {
            EvalRecord r;
            r.item_id = jr.value("item_id", "");
            r.rr = jr.value("rr", 0.0);
            r.ma = jr.value("ma", 0.0);
            r.la = jr.value("la", 0.0);
            r.hr = jr.value("hr", 0.0);
            r.spq_seconds = jr.value("spq_seconds", 0.0);
            r.la_fallback = jr.value("la_fallback", true);
            r.hr_fallback = jr.value("hr_fallback", true);
            if (jr.contains("outcome")) r.outcome = jr["outcome"].get<QueryOutcome>();
            seed.records.push_back(std::move(r));
        }
        report.seeds.push_back(std::move(seed));
    }
    report.means = averages_from_json(j.value("means", nlohmann::json::object()));
    report.mpe = averages_from_json(j.value("mpe", nlohmann::json::object()));
    return report;
}

MetricAverages parse_tsv_means(const std::string& tsv) {
    std::istringstream in(tsv);
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty report TSV");
    const bool has_spq = line.find("\tspq") != std::string::npos;
    while (std::getline(in, line)) {
        if (!line.starts_with("mean\t")) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, '\t');  // label
        MetricAverages m;
        auto next = [&](double& out) {
            if (!std::getline(row, cell, '\t')) throw data_error("short mean row in report TSV");
            out = std::stod(cell);
        };
        next(m.rr);
        next(m.ma);
        next(m.la);
        next(m.hr);
        if (has_spq) next(m.spq);
        return m;
    }
    throw data_error("report TSV has no mean row");
}

void emit_report(const RunReport& report, const std::string& format,
                 const std::filesystem::path& path) {
    std::string content;
    if (format == "markdown" || format == "md")
        content = render_markdown(report);
    else if (format == "tsv")
        content = render_tsv(report);
    else if (format == "json")
        content = report_to_json(report).dump(2) + "\n";
    else
        throw usage_error("unknown report format '" + format + "' (tsv, markdown, json)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write report: " + path.string());
    out << content;
}

}  // namespace tsqa
