#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsqa/chat_backend.hpp"
#include "tsqa/toolset.hpp"

namespace tsqa {

// Everything recorded about one NLQ -> NLR round trip. calls and results
// correspond positionally; a call that failed validation or execution gets
// an {"error": ...} payload at its position.
struct QueryOutcome {
    std::string nlq;
    std::string nlr;
    std::vector<ToolCall> calls;
    std::vector<ToolResult> results;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
    int attempts = 0;
    std::optional<std::string> failure;

    bool succeeded() const { return !failure.has_value(); }
};

void to_json(nlohmann::json& j, const QueryOutcome& o);
void from_json(const nlohmann::json& j, QueryOutcome& o);

// Fixed instruction block; deliberately minimal — tool documentation
// travels as schema declarations, never as prompt prose.
std::string build_system_prompt(const ToolRegistry& registry);

// ceil(len/4): the documented chars-per-token heuristic used for the
// context budget check.
int estimate_tokens(std::string_view text);

// Non-empty when the system prompt plus exported schemas may not fit the
// configured context budget.
std::optional<std::string> context_budget_warning(const ToolRegistry& registry,
                                                  const AgentConfig& config);

struct AgentContext {
    ChatBackend* backend = nullptr;
    const ToolRegistry* registry = nullptr;
    ToolRouter router;
    AgentConfig config;
};

// The orchestration loop: submit NLQ plus schemas, run every requested tool
// call through the router, feed results back, collect the final text.
// Retries the whole query on blank output (config.empty_output_retries) and
// each transport hop on connection failure (config.transport_retries).
QueryOutcome answer(AgentContext& ctx, const std::string& nlq,
                    const std::optional<std::string>& item_id = std::nullopt);

// Line-oriented REPL: reads queries from `in`, prints answers to `out`;
// "/quit" exits. With verbose, prints every filled tool call.
void chat_repl(AgentContext& ctx, std::istream& in, std::ostream& out, bool verbose);

}  // namespace tsqa
