#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsqa/tool_call.hpp"
#include "tsqa/tool_registry.hpp"

namespace tsqa {

// One hard-coded response for a benchmark item. expected_call is the
// ground-truth invocation the response belongs to (filled), used to pick
// between entries when an item expects several calls.
struct StubEntry {
    std::optional<ToolCall> expected_call;
    ToolResult result;
};

struct StubLookup {
    ToolResult result;
    std::optional<std::string> warning;  // routing mismatch, recorded but not fatal
};

// Immutable table of canned tool responses keyed by benchmark item. Lookups
// are pure: the same (item, call) always yields the same bytes.
class StubTable {
public:
    void add(const std::string& item_id, StubEntry entry);
    void map_nlq(const std::string& nlq, const std::string& item_id);

    bool contains(const std::string& item_id) const;
    size_t size() const { return entries_.size(); }

    // Exact NLQ text -> item id, for stub-mode queries arriving without one.
    std::optional<std::string> item_for_nlq(const std::string& nlq) const;

    // Resolution order: entry whose expected call matches the filled call
    // exactly; else first entry for the same tool (argument mismatch is
    // flagged); else first entry of the item (tool routing error is flagged).
    // Unknown item ids raise a data error listing nothing but the id.
    StubLookup lookup(const std::string& item_id, const ToolCall& filled_call) const;

    // Loads a standalone stub file: a JSON array of records
    // {item_id, tool_name, payload[, expected_call]}.
    static StubTable from_file(const std::string& path);

private:
    std::map<std::string, std::vector<StubEntry>> entries_;
    std::map<std::string, std::string> nlq_index_;
};

}  // namespace tsqa
