// tsqa — tool-grounded time-series Q&A over OHLCV data, with a benchmark
// harness. Subcommands: ingest, query, chat, bench, report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "tsqa/agent.hpp"
#include "tsqa/benchmark.hpp"
#include "tsqa/error.hpp"
#include "tsqa/http_backend.hpp"
#include "tsqa/runner.hpp"

namespace fs = std::filesystem;
using namespace tsqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTransport = 3;

struct CliConfig {
    std::string data_dir;
    std::string benchmark_path;
    std::string mode = "stub";
    std::string backend = "mock";       // mock | http
    std::string mock_script;
    std::string out_dir = "out";
    std::string agent_label;
    std::string prompts_dir = "prompts";
    std::vector<uint64_t> seeds{1};
    int parallelism = 1;
    bool no_timing = false;
    bool verbose = false;
    bool judge = false;
    std::string gap_policy = "reject";
    AgentConfig agent;
};

// JSON config file; any flag given on the command line wins.
void apply_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(path + ": " + e.what());
    }
    cfg.data_dir = doc.value("data_dir", cfg.data_dir);
    cfg.benchmark_path = doc.value("benchmark", cfg.benchmark_path);
    cfg.mode = doc.value("mode", cfg.mode);
    cfg.backend = doc.value("backend", cfg.backend);
    cfg.mock_script = doc.value("mock_script", cfg.mock_script);
    cfg.out_dir = doc.value("out_dir", cfg.out_dir);
    cfg.agent_label = doc.value("agent_label", cfg.agent_label);
    cfg.prompts_dir = doc.value("prompts_dir", cfg.prompts_dir);
    cfg.parallelism = doc.value("parallelism", cfg.parallelism);
    cfg.gap_policy = doc.value("gap_policy", cfg.gap_policy);
    if (doc.contains("seeds")) cfg.seeds = doc["seeds"].get<std::vector<uint64_t>>();
    if (doc.contains("agent")) {
        const auto& a = doc["agent"];
        cfg.agent.temperature = a.value("temperature", cfg.agent.temperature);
        cfg.agent.context_budget_tokens =
            a.value("context_budget_tokens", cfg.agent.context_budget_tokens);
        cfg.agent.max_generated_tokens =
            a.value("max_generated_tokens", cfg.agent.max_generated_tokens);
        cfg.agent.transport_retries = a.value("transport_retries", cfg.agent.transport_retries);
        cfg.agent.empty_output_retries =
            a.value("empty_output_retries", cfg.agent.empty_output_retries);
        cfg.agent.max_tool_rounds = a.value("max_tool_rounds", cfg.agent.max_tool_rounds);
        cfg.agent.endpoint = a.value("endpoint", cfg.agent.endpoint);
        cfg.agent.model = a.value("model", cfg.agent.model);
        cfg.agent.credential_env = a.value("credential_env", cfg.agent.credential_env);
    }
}

GapPolicy gap_policy_from(const std::string& name) {
    if (name == "reject") return GapPolicy::reject;
    if (name == "forward-fill" || name == "ffill") return GapPolicy::forward_fill;
    throw usage_error("gap policy must be 'reject' or 'forward-fill'");
}

struct Session {
    MarketStore store;
    ToolRegistry registry;
    BenchmarkFile benchmark;
    StubTable stubs;
    bool has_benchmark = false;
};

// Loads exactly what the chosen mode needs: real mode needs market data,
// stub mode needs the benchmark as its stub source.
Session make_session(const CliConfig& cfg, bool need_benchmark) {
    Session s;
    const ToolMode mode = parse_tool_mode(cfg.mode);
    if (mode == ToolMode::real) {
        if (cfg.data_dir.empty()) throw usage_error("--mode real requires --data-dir");
        s.store.load_data_dir(cfg.data_dir, gap_policy_from(cfg.gap_policy));
    }
    s.registry = build_default_registry(s.store);
    if (mode == ToolMode::stub || need_benchmark || !cfg.benchmark_path.empty()) {
        if (cfg.benchmark_path.empty())
            throw usage_error((mode == ToolMode::stub ? std::string("--mode stub")
                                                      : std::string("bench")) +
                              " requires --benchmark");
        s.benchmark = load_benchmark(cfg.benchmark_path);
        for (const auto& w : s.benchmark.warnings) std::cerr << "warning: " << w << "\n";
        s.stubs = build_stub_table(s.benchmark.items, s.registry);
        s.has_benchmark = true;
    }
    return s;
}

std::unique_ptr<ChatBackend> make_backend(const CliConfig& cfg, const Session& session,
                                          uint64_t seed) {
    if (cfg.backend == "http") return std::make_unique<HttpBackend>(cfg.agent);
    if (cfg.backend != "mock")
        throw usage_error("backend must be 'mock' or 'http', got '" + cfg.backend + "'");
    MockScript script;
    if (!cfg.mock_script.empty())
        script = load_mock_script(cfg.mock_script);
    else if (session.has_benchmark)
        script = make_replay_script(session.benchmark.items);
    else
        throw usage_error("mock backend needs --mock-script or --benchmark");
    return std::make_unique<MockBackend>(std::move(script), seed);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_ingest(const CliConfig& cfg) {
    if (cfg.data_dir.empty()) throw usage_error("ingest requires --data-dir");
    MarketStore store;
    store.load_data_dir(cfg.data_dir, gap_policy_from(cfg.gap_policy));
    std::cout << "loaded " << store.size() << " series from " << cfg.data_dir << "\n";
    for (const auto& key : store.keys()) {
        const auto& series = store.at(key);
        std::cout << "  " << key.label() << ": " << series.size() << " candles @ "
                  << series.candle_interval << "s";
        if (!series.filled_timestamps.empty())
            std::cout << " (" << series.filled_timestamps.size() << " forward-filled)";
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_query(const CliConfig& cfg, const std::string& nlq) {
    Session session = make_session(cfg, false);
    const ToolMode mode = parse_tool_mode(cfg.mode);
    auto backend = make_backend(cfg, session, cfg.agent.seed);
    ToolRouter router(session.registry, mode, session.has_benchmark ? &session.stubs : nullptr);
    AgentContext ctx{backend.get(), &session.registry, router, cfg.agent};
    for (const auto& w : cfg.agent.validate()) std::cerr << "warning: " << w << "\n";

    const QueryOutcome outcome = answer(ctx, nlq);
    if (cfg.verbose) {
        for (size_t i = 0; i < outcome.calls.size(); ++i) {
            std::cout << "[tool] " << outcome.calls[i].tool_name << " "
                      << outcome.calls[i].args.dump() << "\n";
            std::cout << "       -> " << outcome.results[i].payload.dump() << "\n";
        }
        for (const auto& w : outcome.warnings) std::cout << "[warn] " << w << "\n";
    }
    if (outcome.failure) {
        std::cerr << "error: " << *outcome.failure << "\n";
        return outcome.failure->starts_with("transport") ? kExitTransport : kExitData;
    }
    std::cout << outcome.nlr << "\n";
    return kExitOk;
}

int cmd_chat(const CliConfig& cfg) {
    Session session = make_session(cfg, false);
    const ToolMode mode = parse_tool_mode(cfg.mode);
    auto backend = make_backend(cfg, session, cfg.agent.seed);
    ToolRouter router(session.registry, mode, session.has_benchmark ? &session.stubs : nullptr);
    AgentContext ctx{backend.get(), &session.registry, router, cfg.agent};
    for (const auto& w : cfg.agent.validate()) std::cerr << "warning: " << w << "\n";
    chat_repl(ctx, std::cin, std::cout, cfg.verbose);
    return kExitOk;
}

int cmd_bench(const CliConfig& cfg) {
    if (cfg.seeds.empty()) throw usage_error("bench requires at least one seed");
    Session session = make_session(cfg, true);
    const ToolMode mode = parse_tool_mode(cfg.mode);
    ToolRouter router(session.registry, mode, &session.stubs);
    for (const auto& w : cfg.agent.validate()) std::cerr << "warning: " << w << "\n";

    std::unique_ptr<Judge> judge;
    std::unique_ptr<ChatBackend> judge_backend;
    if (cfg.judge) {
        judge_backend = std::make_unique<HttpBackend>(cfg.agent);
        judge = std::make_unique<LlmJudge>(
            *judge_backend, cfg.agent,
            read_file(fs::path(cfg.prompts_dir) / "accuracy_rubric.txt"),
            read_file(fs::path(cfg.prompts_dir) / "divergence_rubric.txt"));
    }

    RunOptions options;
    options.seeds = cfg.seeds;
    options.include_timing = !cfg.no_timing;
    options.parallelism = cfg.parallelism;
    options.judge = judge.get();
    options.agent_label = cfg.agent_label;

    const RunReport report = run_benchmark(
        session.benchmark.items, session.registry, router, cfg.agent,
        [&](uint64_t seed) { return make_backend(cfg, session, seed); }, options);

    fs::create_directories(cfg.out_dir);
    emit_report(report, "json", fs::path(cfg.out_dir) / "report.json");
    emit_report(report, "tsv", fs::path(cfg.out_dir) / "report.tsv");
    emit_report(report, "markdown", fs::path(cfg.out_dir) / "report.md");

    std::cout << render_markdown(report);
    std::cout << "reports written to " << cfg.out_dir << "\n";
    return kExitOk;
}

int cmd_report(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
    nlohmann::json doc;
    {
        std::ifstream in(in_path);
        if (!in) throw data_error("cannot open report: " + in_path);
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw data_error(in_path + ": " + e.what());
        }
    }
    const RunReport report = report_from_json(doc);
    if (out_path.empty()) {
        std::cout << (format == "tsv" ? render_tsv(report) : render_markdown(report));
    } else {
        emit_report(report, format, out_path);
        std::cout << "written to " << out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tool-grounded time-series Q&A engine and benchmark harness"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_file;
    std::string nlq;
    std::string report_in;
    std::string report_format = "markdown";
    std::string report_out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (flags override it)");
        cmd->add_option("--data-dir", cfg.data_dir, "directory with manifest.json and CSV candles");
        cmd->add_option("--benchmark", cfg.benchmark_path, "benchmark TSV path");
        cmd->add_option("--mode", cfg.mode, "tool layer: real or stub");
        cmd->add_option("--backend", cfg.backend, "chat backend: mock or http");
        cmd->add_option("--mock-script", cfg.mock_script, "JSON script for the mock backend");
        cmd->add_option("--endpoint", cfg.agent.endpoint, "chat-completions base URL");
        cmd->add_option("--model", cfg.agent.model, "model name for the http backend");
        cmd->add_option("--credential-env", cfg.agent.credential_env,
                        "environment variable holding the API key");
        cmd->add_option("--temperature", cfg.agent.temperature, "sampling temperature [0,2]");
        cmd->add_option("--seed", cfg.agent.seed, "generation seed");
        cmd->add_option("--context-budget", cfg.agent.context_budget_tokens,
                        "context window budget in tokens");
        cmd->add_option("--max-tokens", cfg.agent.max_generated_tokens,
                        "generation cap in tokens");
        cmd->add_option("--transport-retries", cfg.agent.transport_retries,
                        "per-request transport retries");
        cmd->add_option("--empty-retries", cfg.agent.empty_output_retries,
                        "whole-query retries on empty output");
        cmd->add_option("--gap-policy", cfg.gap_policy, "ingest gaps: reject or forward-fill");
        cmd->add_flag("--verbose", cfg.verbose, "print tool calls and warnings");
    };

    auto* ingest = app.add_subcommand("ingest", "load and validate a candle data directory");
    add_common(ingest);

    auto* query = app.add_subcommand("query", "answer one natural-language question");
    add_common(query);
    query->add_option("--nlq", nlq, "the question")->required();

    auto* chat = app.add_subcommand("chat", "interactive question loop");
    add_common(chat);

    auto* bench = app.add_subcommand("bench", "run the benchmark and write reports");
    add_common(bench);
    bench->add_option("--seeds", cfg.seeds, "seeds, e.g. --seeds 1 10 100")->delimiter(',');
    bench->add_option("--out", cfg.out_dir, "output directory for report files");
    bench->add_option("--parallel", cfg.parallelism, "worker threads (timing runs stay serial)");
    bench->add_option("--agent-label", cfg.agent_label, "row label in the report table");
    bench->add_flag("--no-timing", cfg.no_timing, "omit SPQ so report bytes are reproducible");
    bench->add_flag("--judge", cfg.judge, "score LA/HR with the http backend as judge");
    bench->add_option("--prompts-dir", cfg.prompts_dir, "directory with the judge rubrics");

    auto* report = app.add_subcommand("report", "re-render a persisted report.json");
    report->add_option("--in", report_in, "path to report.json")->required();
    report->add_option("--format", report_format, "markdown or tsv");
    report->add_option("--out", report_out, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
        if (!config_file.empty()) {
            // re-parse so explicit flags override file values
            CliConfig file_cfg;
            apply_config_file(file_cfg, config_file);
            cfg = file_cfg;
            app.clear();
            app.parse(argc, argv);
        }

        if (ingest->parsed()) return cmd_ingest(cfg);
        if (query->parsed()) return cmd_query(cfg, nlq);
        if (chat->parsed()) return cmd_chat(cfg);
        if (bench->parsed()) return cmd_bench(cfg);
        if (report->parsed()) return cmd_report(report_in, report_format, report_out);
        throw usage_error("no subcommand given");
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::usage: return kExitUsage;
            case ErrorKind::transport: return kExitTransport;
            default: return kExitData;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
