#include "tsqa/stub_table.hpp"

#include <fstream>

#include "tsqa/error.hpp"

namespace tsqa {

void StubTable::add(const std::string& item_id, StubEntry entry) {
    entries_[item_id].push_back(std::move(entry));
}

void StubTable::map_nlq(const std::string& nlq, const std::string& item_id) {
    nlq_index_[nlq] = item_id;
}

bool StubTable::contains(const std::string& item_id) const {
    return entries_.count(item_id) > 0;
}

std::optional<std::string> StubTable::item_for_nlq(const std::string& nlq) const {
    const auto it = nlq_index_.find(nlq);
    if (it == nlq_index_.end()) return std::nullopt;
    return it->second;
}

StubLookup StubTable::lookup(const std::string& item_id, const ToolCall& filled_call) const {
    const auto it = entries_.find(item_id);
    if (it == entries_.end() || it->second.empty())
        throw data_error("no stub entry for benchmark item '" + item_id + "'");
    const auto& entries = it->second;

    for (const auto& entry : entries)
        if (entry.expected_call && match_calls(filled_call, *entry.expected_call))
            return {entry.result, std::nullopt};

    for (const auto& entry : entries)
        if (entry.result.tool_name == filled_call.tool_name)
            return {entry.result, "stub for item '" + item_id + "': call arguments differ from "
                                  "the expected " + filled_call.tool_name + " call"};

    return {entries.front().result,
            "stub for item '" + item_id + "': agent called " + filled_call.tool_name +
                " but the item expects " + entries.front().result.tool_name};
}

StubTable StubTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open stub table: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    if (!doc.is_array()) throw data_error(path + ": expected a JSON array of stub records");
    StubTable table;
    for (const auto& record : doc) {
        if (!record.contains("item_id") || !record.contains("tool_name") ||
            !record.contains("payload"))
            throw data_error(path + ": stub record needs item_id, tool_name and payload");
        StubEntry entry;
        entry.result.tool_name = record["tool_name"].get<std::string>();
        entry.result.payload = record["payload"];
        if (record.contains("expected_call"))
            entry.expected_call = record["expected_call"].get<ToolCall>();
        table.add(record["item_id"].get<std::string>(), std::move(entry));
    }
    return table;
}

}  // namespace tsqa
