#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tsqa/mock_backend.hpp"
#include "tsqa/stub_table.hpp"
#include "tsqa/tool_call.hpp"

namespace tsqa {

// One corpus row: the query, what a correct answer contains, the ground
// truth calls and the canned tool results that stub mode serves for them.
struct BenchmarkItem {
    std::string item_id;
    std::string nlq;
    std::vector<std::string> expected_keywords;
    std::string expected_nlr;
    std::vector<ToolCall> expected_calls;   // raw args as authored
    std::vector<ToolResult> stub_results;   // aligned 1:1 with expected_calls
};

struct BenchmarkFile {
    std::vector<BenchmarkItem> items;
    std::vector<std::string> warnings;  // e.g. item count != 100
};

// TSV columns: item_id, nlq, expected_keywords (|-separated), expected_nlr,
// expected_calls (JSON), stub_results (JSON). Errors name the line.
BenchmarkFile load_benchmark(const std::filesystem::path& path);

// Stub table for the corpus; expected calls are filled through the registry
// so lookups can match on exact arguments.
StubTable build_stub_table(const std::vector<BenchmarkItem>& items, const ToolRegistry& registry);

// A script that replays every item's ground-truth calls and expected NLR.
MockScript make_replay_script(const std::vector<BenchmarkItem>& items);

}  // namespace tsqa
