#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsqa/tool_call.hpp"

namespace tsqa {

enum class ParamType { string, integer, number };

struct ToolParam {
    std::string name;
    ParamType type = ParamType::string;
    bool required = false;
    nlohmann::json default_value;        // present iff !required
    std::vector<std::string> allowed;    // enum values, canonical lowercase
    std::string description;
};

struct ToolSchema {
    std::string name;
    std::string description;  // the only tool documentation the agent sees
    std::vector<ToolParam> params;
    std::string return_kind;  // payload shape tag: number | label_list | ...

    const ToolParam* find_param(const std::string& name) const;
};

struct FillResult {
    nlohmann::json args = nlohmann::json::object();  // complete, typed argument map
    std::vector<std::string> warnings;               // coercions worth recording
};

// Applies the schema to a raw argument map: rejects unknown keys, demands
// required params, injects defaults, coerces types (ints are accepted for
// number params; numeric strings are coerced with a warning) and
// canonicalizes enum values to lowercase.
FillResult fill_defaults(const ToolSchema& schema, const nlohmann::json& raw_args);

using ToolHandler = std::function<ToolResult(const nlohmann::json& args)>;

class ToolRegistry {
public:
    void register_tool(ToolSchema schema, ToolHandler handler);

    bool has(const std::string& name) const;
    // Throws usage_error listing registered names when absent.
    const ToolSchema& schema(const std::string& name) const;
    const std::vector<ToolSchema>& schemas() const { return schemas_; }
    size_t size() const { return schemas_.size(); }

    // Builds a filled ToolCall from the agent's raw arguments.
    ToolCall make_call(const std::string& tool_name, const nlohmann::json& raw_args,
                       std::vector<std::string>* warnings = nullptr) const;

    // Chat-completions style declarations, one per registered tool, in
    // registration order (ordered_json keeps parameter order intact). The
    // "returns" tag is an extension; parse_schema() round-trips it.
    nlohmann::ordered_json export_schemas() const;
    static ToolSchema parse_schema(const nlohmann::ordered_json& declaration);

    // Runs the real grounding handler for a filled call. Tool errors are
    // rethrown with the tool name attached.
    ToolResult dispatch(const ToolCall& filled) const;

private:
    std::vector<ToolSchema> schemas_;
    std::map<std::string, size_t> index_;
    std::map<std::string, ToolHandler> handlers_;
};

}  // namespace tsqa
