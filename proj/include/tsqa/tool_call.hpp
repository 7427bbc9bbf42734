#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace tsqa {

// Structured tool output. The payload is an object with a stable key per
// tool (volatility -> {"volatility_percent": ...}, correlations ->
// {"correlation": ...}, the seasonality tools -> label/timestamp lists).
struct ToolResult {
    std::string tool_name;
    nlohmann::json payload = nlohmann::json::object();

    bool operator==(const ToolResult&) const = default;
};

void to_json(nlohmann::json& j, const ToolResult& r);
void from_json(const nlohmann::json& j, ToolResult& r);

// One tool invocation. raw_args is the map as emitted by the agent;
// args is the same map after default filling and type coercion.
struct ToolCall {
    std::string tool_name;
    nlohmann::json args = nlohmann::json::object();
    nlohmann::json raw_args = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const ToolCall& c);
void from_json(const nlohmann::json& j, ToolCall& c);

// Comparison key for filled calls: tool name plus args with strings
// case-folded and every number rendered in shortest double form, so an
// integer 7 and a float 7.0 compare equal.
std::string canonical_signature(const ToolCall& call);

// True iff the tool names match and the filled argument maps are equal
// (strings case-insensitively, numbers exactly). Both calls must already be
// default-filled.
bool match_calls(const ToolCall& actual, const ToolCall& expected);

}  // namespace tsqa
