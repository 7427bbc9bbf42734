#include "tsqa/benchmark.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

BenchmarkFile load_benchmark(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open benchmark: " + path.string());

    BenchmarkFile file;
    std::string line;
    size_t line_no = 0;

    if (!std::getline(in, line)) throw data_error(path.string() + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string expected_header =
        "item_id\tnlq\texpected_keywords\texpected_nlr\texpected_calls\tstub_results";
    if (line != expected_header)
        throw data_error(path.string() + ": bad header; expected item_id, nlq, "
                         "expected_keywords, expected_nlr, expected_calls, stub_results");

    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 6)
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": expected 6 columns, got " + std::to_string(fields.size()));

        BenchmarkItem item;
        item.item_id = fields[0];
        item.nlq = fields[1];
        item.expected_nlr = fields[3];
        if (item.item_id.empty())
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": empty item_id");
        if (!seen_ids.insert(item.item_id).second)
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": duplicate item_id '" + item.item_id + "'");
        if (item.nlq.empty())
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": column nlq is empty");
        if (item.expected_nlr.empty())
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": column expected_nlr is empty");

        for (const auto& kw : split(fields[2], '|'))
            if (!kw.empty()) item.expected_keywords.push_back(kw);

        try {
            const auto calls = nlohmann::json::parse(fields[4]);
            for (const auto& c : calls) item.expected_calls.push_back(c.get<ToolCall>());
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": column expected_calls: " + e.what());
        }
        try {
            const auto results = nlohmann::json::parse(fields[5]);
            for (const auto& r : results) item.stub_results.push_back(r.get<ToolResult>());
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": column stub_results: " + e.what());
        }
        if (item.expected_calls.empty())
            throw data_error(path.string() + " line " + std::to_string(line_no) +
                             ": expected_calls is empty");
        if (item.expected_calls.size() != item.stub_results.size())
            throw data_error(path.string() + " line " + std::to_string(line_no) + ": " +
                             std::to_string(item.expected_calls.size()) + " expected_calls vs " +
                             std::to_string(item.stub_results.size()) + " stub_results");

        file.items.push_back(std::move(item));
    }

    if (file.items.size() != 100)
        file.warnings.push_back(path.string() + ": expected a 100-item corpus, found " +
                                std::to_string(file.items.size()));
    return file;
}

StubTable build_stub_table(const std::vector<BenchmarkItem>& items,
                           const ToolRegistry& registry) {
    StubTable table;
    for (const auto& item : items) {
        for (size_t i = 0; i < item.expected_calls.size(); ++i) {
            StubEntry entry;
            entry.expected_call = registry.make_call(item.expected_calls[i].tool_name,
                                                     item.expected_calls[i].raw_args);
            entry.result = item.stub_results[i];
            table.add(item.item_id, std::move(entry));
        }
        table.map_nlq(item.nlq, item.item_id);
    }
    return table;
}

MockScript make_replay_script(const std::vector<BenchmarkItem>& items) {
    MockScript script;
    for (const auto& item : items) {
        MockScriptEntry entry;
        entry.match = item.nlq;
        entry.calls = item.expected_calls;
        entry.final_text = item.expected_nlr;
        script.push_back(std::move(entry));
    }
    return script;
}

}  // namespace tsqa
