// End-to-end checks of the tsqa binary: subcommands, exit codes, report
// determinism. Usage: test_cli <tsqa-binary> <repo-root>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buffer{};
    size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <tsqa-binary> <repo-root>\n";
        return 2;
    }
    const std::string tsqa = argv[1];
    const fs::path root = argv[2];
    const std::string data_dir = (root / "data").string();
    const std::string benchmark = (root / "benchmark" / "benchmark.tsv").string();
    const fs::path work = fs::temp_directory_path() / "tsqa_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    // ingest: valid directory lists every instrument
    {
        const auto r = run(tsqa + " ingest --data-dir " + data_dir);
        expect(r.exit_code == 0, "ingest exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("BTC/USDT@BINANCE") != std::string::npos, "ingest lists BTC");
        expect(r.output.find("BTC/USDT@KRAKEN") != std::string::npos, "ingest lists KRAKEN");
    }

    // ingest: missing manifest is a data error (exit 2)
    {
        const auto r = run(tsqa + " ingest --data-dir " + (work / "nope").string());
        expect(r.exit_code == 2, "missing manifest exit code, got " +
                                     std::to_string(r.exit_code));
    }

    // ingest: a gapped file under the default reject policy aborts nonzero
    {
        fs::create_directories(work / "gapped");
        std::ofstream csv(work / "gapped" / "g.csv");
        csv << "timestamp,open,high,low,close,volume\n"
            << "3600,10,11,9,10,1\n"
            << "10800,10,11,9,10,1\n";
        csv.close();
        std::ofstream manifest(work / "gapped" / "manifest.json");
        manifest << R"({"series":[{"file":"g.csv","base":"BTC","quote":"USDT",)"
                 << R"("exchange":"BINANCE","interval":"1h"}]})";
        manifest.close();
        const auto r = run(tsqa + " ingest --data-dir " + (work / "gapped").string());
        expect(r.exit_code == 2, "gapped ingest exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("missing timestamp 7200") != std::string::npos,
               "gap error names the missing timestamp");
        // forward-fill accepts the same file
        const auto filled = run(tsqa + " ingest --data-dir " + (work / "gapped").string() +
                                " --gap-policy forward-fill");
        expect(filled.exit_code == 0, "forward-fill ingest exit code");
        expect(filled.output.find("forward-filled") != std::string::npos,
               "forward-fill is reported");
    }

    // usage errors exit 1
    {
        const auto r = run(tsqa + " query --mode stub --benchmark " + benchmark);
        expect(r.exit_code == 1, "missing --nlq exit code, got " + std::to_string(r.exit_code));
        const auto bad = run(tsqa + " query --nlq hi --mode nonsense --benchmark " + benchmark);
        expect(bad.exit_code == 1, "bad mode exit code, got " + std::to_string(bad.exit_code));
    }

    // stub-mode query answers the canonical correlation item
    {
        const auto r = run(tsqa +
                           " query --mode stub --benchmark " + benchmark +
                           " --verbose --nlq \"What was the price correlation between BTC and "
                           "ETH quoted in USDT on the BINANCE exchange over the past 7 days?\"");
        expect(r.exit_code == 0, "stub query exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("1.0") != std::string::npos, "stub query NLR contains 1.0");
        expect(r.output.find("correlation_between_tokens") != std::string::npos,
               "--verbose prints the tool call");
        expect(r.output.find("\"exchange\":\"BINANCE\"") != std::string::npos,
               "--verbose prints filled args");
    }

    // real-mode query through a mock script computes from the data directory
    {
        std::ofstream script(work / "script.json");
        script << R"([{"match":"btc volatility",)"
               << R"("calls":[{"tool_name":"volatility","args":{"base_token":"BTC"}}],)"
               << R"("final_text":"Volatility computed."}])";
        script.close();
        const auto r = run(tsqa + " query --mode real --data-dir " + data_dir +
                           " --mock-script " + (work / "script.json").string() +
                           " --verbose --nlq \"btc volatility\"");
        expect(r.exit_code == 0, "real query exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("volatility_percent") != std::string::npos,
               "real query prints the computed payload");
    }

    // transport failures exit 3
    {
        const auto r = run(tsqa + " query --mode stub --benchmark " + benchmark +
                           " --backend http --endpoint http://127.0.0.1:1/v1 --model m" +
                           " --transport-retries 0 --nlq \"What is the volatility of BTC?\"");
        expect(r.exit_code == 3, "transport exit code, got " + std::to_string(r.exit_code));
    }

    // bench: deterministic reports under --no-timing, byte for byte
    {
        const std::string out1 = (work / "run1").string();
        const std::string out2 = (work / "run2").string();
        const std::string cmd = tsqa + " bench --mode stub --benchmark " + benchmark +
                                " --no-timing --seeds 1,10,100 --out ";
        const auto r1 = run(cmd + out1);
        const auto r2 = run(cmd + out2);
        expect(r1.exit_code == 0 && r2.exit_code == 0, "bench exit codes");
        expect(r1.output.find("MPE") != std::string::npos, "bench summary shows the MPE row");
        for (const char* name : {"report.json", "report.tsv", "report.md"}) {
            const auto a = read_bytes(fs::path(out1) / name);
            const auto b = read_bytes(fs::path(out2) / name);
            expect(!a.empty() && a == b,
                   std::string("bench reports byte-identical: ") + name);
        }
    }

    // report: re-render a persisted run
    {
        const auto r = run(tsqa + " report --in " + (work / "run1" / "report.json").string() +
                           " --format tsv");
        expect(r.exit_code == 0, "report exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("mean\t1\t1\t1\t0") != std::string::npos,
               "re-rendered TSV carries the perfect-replay means");
    }

    // chat: scripted stdin session quits cleanly
    {
        const auto r = run("printf '/quit\\n' | " + tsqa + " chat --mode stub --benchmark " +
                           benchmark);
        expect(r.exit_code == 0, "chat exit code, got " + std::to_string(r.exit_code));
        expect(r.output.find("bye") != std::string::npos, "chat says goodbye");
    }

    fs::remove_all(work);
    if (g_failures) {
        std::cerr << g_failures << " CLI check(s) failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}
